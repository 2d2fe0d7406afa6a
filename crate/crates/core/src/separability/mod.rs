//! Separating elements from subsets in finite quotients.
//!
//! Every supported target is the orbit of a base point under a finitely
//! generated group acting by `x -> a x b`, so its image in a stage is found
//! by a breadth-first search over the stage.

mod cache;
mod lattice;
mod schedule;
mod stage;
mod theorem_a;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use cache::{cache_key, separate_cached, CacheLookup, CertificateCache};
pub use lattice::{lattice_semidirect_schedule, matrix_order_mod, LatticeElem, LatticeSemidirect, Matrix};
pub use schedule::{check_stage_homomorphy, pow, FiniteSchedule, Integers, ProductSchedule, ScheduledGroup};
pub use stage::{LatticeStage, Stage, TABLE_CAP};
pub use theorem_a::{verify_nest_tcc_correspondence, TheoremAMode, TheoremAReport, EXHAUSTIVE_ORDER_CAP};

/// Stage budget used when none is given.
pub const DEFAULT_BUDGET: usize = 64;

/// Largest stage order the search will walk; orbits are tracked with a
/// bitmap over the whole stage.
pub const SEARCH_ORDER_CAP: usize = 1 << 26;

/// A subset of a scheduled group, described by finitely many elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeparabilityTarget<E> {
    Singleton(E),
    /// Subgroup generated by the listed elements.
    Subgroup(Vec<E>),
    /// Normal closure of the listed elements.
    NormalClosure(Vec<E>),
    ConjugacyClass(E),
    /// `{ψ(h) base φ(h)^-1 : h ∈ H}` where `H` is generated by `h_1, ...`
    /// and `phi[i] = φ(h_i)`, `psi[i] = ψ(h_i)`.
    TwistedClass {
        phi: Vec<E>,
        psi: Vec<E>,
        base: E,
    },
    /// The nest `{a b : (a, b) ∈ P}` of the pre-nest `P` generated, as a
    /// subgroup of `G × G^op`, by `(k, 1)`, `(1, k')` and the graph pairs.
    Nest {
        k1: Vec<E>,
        k2: Vec<E>,
        #[serde(default)]
        graph: Vec<(E, E)>,
    },
}

impl<E> SeparabilityTarget<E> {
    pub fn try_map<T>(&self, mut f: impl FnMut(&E) -> Result<T>) -> Result<SeparabilityTarget<T>> {
        let mut all = |xs: &[E]| xs.iter().map(&mut f).collect::<Result<Vec<T>>>();
        Ok(match self {
            SeparabilityTarget::Singleton(x) => SeparabilityTarget::Singleton(f(x)?),
            SeparabilityTarget::Subgroup(w) => SeparabilityTarget::Subgroup(all(w)?),
            SeparabilityTarget::NormalClosure(w) => SeparabilityTarget::NormalClosure(all(w)?),
            SeparabilityTarget::ConjugacyClass(x) => SeparabilityTarget::ConjugacyClass(f(x)?),
            SeparabilityTarget::TwistedClass { phi, psi, base } => {
                let phi = all(phi)?;
                let psi = all(psi)?;
                SeparabilityTarget::TwistedClass { phi, psi, base: f(base)? }
            }
            SeparabilityTarget::Nest { k1, k2, graph } => {
                let k1 = all(k1)?;
                let k2 = all(k2)?;
                let graph = graph.iter().map(|(x, y)| Ok((f(x)?, f(y)?))).collect::<Result<Vec<_>>>()?;
                SeparabilityTarget::Nest { k1, k2, graph }
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SeparabilityTarget::Singleton(_) => "singleton",
            SeparabilityTarget::Subgroup(_) => "subgroup",
            SeparabilityTarget::NormalClosure(_) => "normal_closure",
            SeparabilityTarget::ConjugacyClass(_) => "conjugacy_class",
            SeparabilityTarget::TwistedClass { .. } => "twisted_class",
            SeparabilityTarget::Nest { .. } => "nest",
        }
    }
}

/// Base point and generator pairs `(a, b)` acting by `x -> a x b`.
pub struct OrbitSpec<E> {
    pub base: E,
    pub pairs: Vec<(E, E)>,
}

pub fn orbit_spec<S: ScheduledGroup>(sg: &S, target: &SeparabilityTarget<S::Elem>) -> Result<OrbitSpec<S::Elem>> {
    let one = sg.identity();
    let conj =
        || -> Result<Vec<(S::Elem, S::Elem)>> { sg.generators().into_iter().map(|s| Ok((sg.inv(&s)?, s))).collect() };
    Ok(match target {
        SeparabilityTarget::Singleton(g) => OrbitSpec { base: g.clone(), pairs: Vec::new() },
        SeparabilityTarget::Subgroup(w) => {
            OrbitSpec { base: one.clone(), pairs: w.iter().map(|x| (x.clone(), one.clone())).collect() }
        }
        SeparabilityTarget::NormalClosure(w) => {
            let mut pairs: Vec<_> = w.iter().map(|x| (x.clone(), one.clone())).collect();
            pairs.extend(conj()?);
            OrbitSpec { base: one, pairs }
        }
        SeparabilityTarget::ConjugacyClass(g) => OrbitSpec { base: g.clone(), pairs: conj()? },
        SeparabilityTarget::TwistedClass { phi, psi, base } => {
            if phi.len() != psi.len() {
                return Err(Error::InvalidArgs(format!(
                    "φ has {} generator images and ψ has {}",
                    phi.len(),
                    psi.len()
                )));
            }
            let pairs = psi.iter().zip(phi).map(|(p, f)| Ok((p.clone(), sg.inv(f)?))).collect::<Result<_>>()?;
            OrbitSpec { base: base.clone(), pairs }
        }
        SeparabilityTarget::Nest { k1, k2, graph } => {
            let mut pairs: Vec<_> = k1.iter().map(|x| (x.clone(), one.clone())).collect();
            pairs.extend(k2.iter().map(|y| (one.clone(), y.clone())));
            pairs.extend(graph.iter().cloned());
            OrbitSpec { base: one, pairs }
        }
    })
}

/// Orbit of `base` under `x -> a x b` in a stage. Stops early once `stop`
/// is reached; the second component says whether it was.
pub fn stage_orbit(stage: &Stage, base: usize, pairs: &[(usize, usize)], stop: Option<usize>) -> (Vec<usize>, bool) {
    let mut seen = vec![false; stage.order()];
    seen[base] = true;
    let mut members = vec![base];
    if stop == Some(base) {
        return (members, true);
    }
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &(a, b) in pairs {
            let y = stage.mul(stage.mul(a, x), b);
            if !seen[y] {
                if stop == Some(y) {
                    members.push(y);
                    return (members, true);
                }
                seen[y] = true;
                members.push(y);
            }
        }
    }
    members.sort_unstable();
    (members, false)
}

/// A finite quotient in which `g` lies outside the image of the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparabilityCertificate {
    pub family: String,
    pub stage: usize,
    pub order: usize,
    pub params: Value,
    pub target: SeparabilityTarget<String>,
    pub g: String,
    pub g_image: usize,
    /// Sorted image of the target in the stage.
    pub target_image: Vec<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeparationOutcome {
    Certified(Box<SeparabilityCertificate>),
    /// No stage below the budget separates. Not a verdict of inseparability.
    /// `order_cap_at` is set when the search stopped early at a stage larger
    /// than [`SEARCH_ORDER_CAP`].
    Exhausted {
        budget: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order_cap_at: Option<usize>,
    },
}

impl SeparationOutcome {
    pub fn certificate(&self) -> Option<&SeparabilityCertificate> {
        match self {
            SeparationOutcome::Certified(c) => Some(c),
            SeparationOutcome::Exhausted { .. } => None,
        }
    }
}

struct Projected {
    base: usize,
    pairs: Vec<(usize, usize)>,
    g: usize,
}

fn project_all<S: ScheduledGroup>(sg: &S, stage: &Stage, spec: &OrbitSpec<S::Elem>, g: &S::Elem) -> Result<Projected> {
    Ok(Projected {
        base: sg.project(stage, &spec.base)?,
        pairs: spec
            .pairs
            .iter()
            .map(|(a, b)| Ok((sg.project(stage, a)?, sg.project(stage, b)?)))
            .collect::<Result<_>>()?,
        g: sg.project(stage, g)?,
    })
}

/// Searches stages `0..budget` for the first one separating `g` from the target.
///
/// On a faithful schedule, `g` inside the target is reported as
/// [`Error::ElementInTarget`].
pub fn separate<S: ScheduledGroup>(
    sg: &S,
    target: &SeparabilityTarget<S::Elem>,
    g: &S::Elem,
    budget: usize,
) -> Result<SeparationOutcome> {
    if budget == 0 {
        return Err(Error::BudgetZero);
    }
    let spec = orbit_spec(sg, target)?;
    for index in 0..budget {
        let stage = sg.stage(index)?;
        if stage.order() > SEARCH_ORDER_CAP {
            return Ok(SeparationOutcome::Exhausted { budget, order_cap_at: Some(index) });
        }
        let p = project_all(sg, &stage, &spec, g)?;
        let (image, hit) = stage_orbit(&stage, p.base, &p.pairs, Some(p.g));
        if !hit {
            let cert = SeparabilityCertificate {
                family: sg.family(),
                stage: index,
                order: stage.order(),
                params: stage.params(),
                target: target.try_map(|x| Ok(sg.format_elem(x)))?,
                g: sg.format_elem(g),
                g_image: p.g,
                target_image: image,
                verified: true,
            };
            return Ok(SeparationOutcome::Certified(Box::new(cert)));
        }
        if sg.faithful() {
            return Err(Error::ElementInTarget);
        }
    }
    Ok(SeparationOutcome::Exhausted { budget, order_cap_at: None })
}

/// Recomputes a certificate from scratch and checks every recorded field.
pub fn verify_certificate<S: ScheduledGroup>(sg: &S, cert: &SeparabilityCertificate) -> Result<()> {
    let mismatch = |what: &str| Err(Error::CertificateMismatch(what.to_string()));
    if cert.family != sg.family() {
        return mismatch("family");
    }
    if !cert.verified {
        return mismatch("certificate is not marked verified");
    }
    let target = cert.target.try_map(|s| sg.parse_elem(s))?;
    let g = sg.parse_elem(&cert.g)?;
    let spec = orbit_spec(sg, &target)?;
    let stage = sg.stage(cert.stage)?;
    if stage.order() != cert.order {
        return mismatch("stage order");
    }
    if stage.order() > SEARCH_ORDER_CAP {
        return mismatch("stage beyond the search cap");
    }
    if stage.params() != cert.params {
        return mismatch("stage parameters");
    }
    let p = project_all(sg, &stage, &spec, &g)?;
    if p.g != cert.g_image {
        return mismatch("image of g");
    }
    let (image, hit) = stage_orbit(&stage, p.base, &p.pairs, None);
    if image != cert.target_image {
        return mismatch("image of the target");
    }
    if hit || image.binary_search(&p.g).is_ok() {
        return mismatch("g lies in the image of the target");
    }
    Ok(())
}

/// Result of separating through the double coset `AB` in `H × G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCosetOutcome {
    /// Search over `H × G` for `(1, g1 g2^-1)` against `AB`.
    pub product: SeparationOutcome,
    /// The same stage index read on the `G` factor, as a twisted-class certificate.
    pub converted: Option<SeparabilityCertificate>,
}

/// Separates `g1` from the `(φ, ψ)`-class of `g2` by separating `(1, g1 g2^-1)`
/// from the double coset `AB`, `A = {(h, ψ(h))}`, `B = {(h, g2 φ(h) g2^-1)}`.
/// `phi` and `psi` are the images of the generators of `h_side`.
#[allow(clippy::too_many_arguments)]
pub fn product_double_coset_separate<H: ScheduledGroup, G: ScheduledGroup>(
    h_side: &H,
    g_side: &G,
    phi: &[G::Elem],
    psi: &[G::Elem],
    g1: &G::Elem,
    g2: &G::Elem,
    budget: usize,
) -> Result<DoubleCosetOutcome> {
    let h_gens = h_side.generators();
    if phi.len() != h_gens.len() || psi.len() != h_gens.len() {
        return Err(Error::MissingGeneratorImage(phi.len().min(psi.len())));
    }
    if g1 == g2 {
        return Err(Error::ElementInTarget);
    }
    let product = ProductSchedule { left: h_side, right: g_side };
    let g2_inv = g_side.inv(g2)?;
    let k1: Vec<_> = h_gens.iter().zip(psi).map(|(h, p)| (h.clone(), p.clone())).collect();
    let k2 = h_gens
        .iter()
        .zip(phi)
        .map(|(h, f)| Ok((h.clone(), g_side.mul(&g_side.mul(g2, f)?, &g2_inv)?)))
        .collect::<Result<Vec<_>>>()?;
    let target = SeparabilityTarget::Nest { k1, k2, graph: Vec::new() };
    let x = (h_side.identity(), g_side.mul(g1, &g2_inv)?);
    let outcome = separate(&product, &target, &x, budget)?;
    let converted = match &outcome {
        SeparationOutcome::Certified(c) => {
            let twisted = SeparabilityTarget::TwistedClass { phi: phi.to_vec(), psi: psi.to_vec(), base: g2.clone() };
            let spec = orbit_spec(g_side, &twisted)?;
            let stage = g_side.stage(c.stage)?;
            let p = project_all(g_side, &stage, &spec, g1)?;
            let (image, hit) = stage_orbit(&stage, p.base, &p.pairs, Some(p.g));
            if hit {
                return Err(Error::CertificateMismatch("G-factor stage does not separate".into()));
            }
            let cert = SeparabilityCertificate {
                family: g_side.family(),
                stage: c.stage,
                order: stage.order(),
                params: stage.params(),
                target: twisted.try_map(|x| Ok(g_side.format_elem(x)))?,
                g: g_side.format_elem(g1),
                g_image: p.g,
                target_image: image,
                verified: true,
            };
            verify_certificate(g_side, &cert)?;
            Some(cert)
        }
        SeparationOutcome::Exhausted { .. } => None,
    };
    Ok(DoubleCosetOutcome { product: outcome, converted })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::symmetric;

    #[test]
    fn integers_singleton_and_subgroup() {
        let z = Integers;
        let c = separate(&z, &SeparabilityTarget::Singleton(0), &5, 8).unwrap();
        let c = c.certificate().unwrap();
        assert_eq!(c.stage, 0);
        assert_eq!(c.params, serde_json::json!({"m": 2}));
        verify_certificate(&z, c).unwrap();
        // 6Z + 2Z = 2Z already misses 3
        let c = separate(&z, &SeparabilityTarget::Subgroup(vec![6]), &3, 8).unwrap();
        assert_eq!(c.certificate().unwrap().params, serde_json::json!({"m": 2}));
        // 4 ∈ 6Z + mZ for m = 2; first miss is m = 3
        let c = separate(&z, &SeparabilityTarget::Subgroup(vec![6]), &4, 8).unwrap();
        assert_eq!(c.certificate().unwrap().params, serde_json::json!({"m": 3}));
        assert_eq!(separate(&z, &SeparabilityTarget::Singleton(0), &5, 0), Err(Error::BudgetZero));
        // 0 ≡ 120 mod m for m = 2..6
        let out = separate(&z, &SeparabilityTarget::Singleton(0), &120, 5).unwrap();
        assert_eq!(out, SeparationOutcome::Exhausted { budget: 5, order_cap_at: None });
    }

    #[test]
    fn tampered_certificate_fails() {
        let z = Integers;
        let out = separate(&z, &SeparabilityTarget::Singleton(0), &5, 8).unwrap();
        let mut c = out.certificate().unwrap().clone();
        let json = serde_json::to_string(&c).unwrap();
        let back: SeparabilityCertificate = serde_json::from_str(&json).unwrap();
        verify_certificate(&z, &back).unwrap();
        c.g_image = 0;
        assert!(matches!(verify_certificate(&z, &c), Err(Error::CertificateMismatch(_))));
    }

    #[test]
    fn finite_soundness_s3() {
        let g = Arc::new(symmetric(3).unwrap());
        let f = FiniteSchedule::new("S3", g.clone());
        let t = g.parse_elem("(0 1)").unwrap();
        let target = SeparabilityTarget::ConjugacyClass(t);
        for x in g.elements() {
            let in_class = g.elem_order(x) == 2;
            let r = separate(&f, &target, &x, 4);
            if in_class {
                assert_eq!(r, Err(Error::ElementInTarget));
            } else {
                let c = r.unwrap();
                verify_certificate(&f, c.certificate().unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn double_coset_on_s3() {
        let g = Arc::new(symmetric(3).unwrap());
        let f = FiniteSchedule::new("S3", g.clone());
        let ids = g.gens().to_vec();
        let g1 = g.parse_elem("(0 1)").unwrap();
        let g2 = g.parse_elem("(0 1 2)").unwrap();
        let out = product_double_coset_separate(&f, &f, &ids, &ids, &g1, &g2, 4).unwrap();
        assert_eq!(out.product.certificate().unwrap().stage, 0);
        assert_eq!(out.converted.unwrap().stage, 0);
        assert_eq!(product_double_coset_separate(&f, &f, &ids, &ids, &g1, &g1, 4), Err(Error::ElementInTarget));
        // a transposition is conjugate to another one
        let g3 = g.parse_elem("(1 2)").unwrap();
        assert_eq!(product_double_coset_separate(&f, &f, &ids, &ids, &g1, &g3, 4), Err(Error::ElementInTarget));
    }
}
