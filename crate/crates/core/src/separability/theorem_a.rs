//! Exhaustive check that every nest is the identity twisted class of the
//! homomorphism pair built from it.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupRef, Limits};
use crate::nests::{all_data, hom_pair_from_nest, nest_of, prenest_from_datum, prenest_from_hom_pair, NestDatum};
use crate::twisted::twisted_class;

/// Largest order accepted in exhaustive mode.
pub const EXHAUSTIVE_ORDER_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremAMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub group_order: usize,
    pub data_total: usize,
    pub data_checked: usize,
    pub failures: Vec<String>,
}

impl TheoremAReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_datum(d: &NestDatum) -> Result<Option<String>> {
    let p = prenest_from_datum(d)?;
    let hp = hom_pair_from_nest(&p)?;
    let nest = nest_of(&p);
    let class = twisted_class(&hp.pair, 0)?.members;
    let describe = || {
        format!(
            "datum |S1|={} |K1|={} |S2|={} |K2|={}",
            d.side1().sub().order(),
            d.side1().kernel().order(),
            d.side2().sub().order(),
            d.side2().kernel().order()
        )
    };
    if nest != class {
        return Ok(Some(format!("{}: nest {nest:?} but class of 1 is {class:?}", describe())));
    }
    if prenest_from_hom_pair(&hp.pair) != p {
        return Ok(Some(format!("{}: pre-nest not reproduced by its homomorphism pair", describe())));
    }
    Ok(None)
}

pub fn verify_nest_tcc_correspondence(g: &GroupRef, mode: TheoremAMode) -> Result<TheoremAReport> {
    if mode == TheoremAMode::Exhaustive && g.order() > EXHAUSTIVE_ORDER_CAP {
        return Err(Error::OrderCapExceeded { order: g.order(), cap: EXHAUSTIVE_ORDER_CAP });
    }
    let data = all_data(g, &Limits::default())?;
    let chosen: Vec<&NestDatum> = match mode {
        TheoremAMode::Exhaustive => data.iter().collect(),
        TheoremAMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            data.choose_multiple(&mut rng, count.min(data.len())).collect()
        }
    };
    let mut failures = Vec::new();
    for d in &chosen {
        if let Some(f) = check_datum(d)? {
            failures.push(f);
        }
    }
    Ok(TheoremAReport { group_order: g.order(), data_total: data.len(), data_checked: chosen.len(), failures })
}
