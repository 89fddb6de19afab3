use calderon_core::symbols::{mean_growth_exponent, theta_inf, Endpoint};
use calderon_core::harness::truncation_sequence;
use calderon_core::boundedness::classify;
use calderon_core::parse_symbol;
fn main() {
    for t in ["sininvpow(alpha=1,beta=0.5)","sininvpow(alpha=0.5,beta=0.75)","cosinvpow(alpha=1,beta=0.5)","sininvpow(alpha=2,beta=0.5)","sininvpow(alpha=0.3,beta=0.8)"] {
        let s = parse_symbol(t).unwrap();
        for m in 1..=4 {
            let z = mean_growth_exponent(&s, m, Endpoint::Zero).unwrap();
            let i = mean_growth_exponent(&s, m, Endpoint::Infinity).unwrap();
            println!("{t} m={m} zero {:.3} inc {} inf {:.3} inc {}", z.exponent, z.inconclusive, i.exponent, i.inconclusive);
        }
    }
    let s = parse_symbol("logpow(alpha=1,beta=0.5)").unwrap();
    for v in [1e-2,1e-4,1e-6] { println!("theta {v} {}", theta_inf(&s, v).unwrap()); }
    for n in [1,2,4,8,16] { let t = truncation_sequence(1.0,0.5,n).unwrap(); println!("{t} {}", classify(&t,4).unwrap().verdict.label()); }
}
