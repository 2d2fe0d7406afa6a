//! The acceptance suite: exhaustive small-instance checks of every claim the
//! library implements, plus certificate runs on the lattice family.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{automorphisms, hom_sample};
use crate::error::{Error, Result};
use crate::group::{
    all_normal_subgroups, all_subgroups, centre, quotient, small_groups, Elem, GroupRef, Limits, Subgroup,
};
use crate::nests::{
    all_prenests, datum_from_prenest, hom_pair_from_nest, nest_of, prenest_from_datum, prenest_from_hom_pair,
    pullback_prenest, pushforward_prenest, Pair,
};
use crate::oracle::prenests_by_subset_scan;
use crate::separability::{
    lattice_semidirect_schedule, orbit_spec, product_double_coset_separate, separate, separate_cached, stage_orbit,
    verify_certificate, verify_nest_tcc_correspondence, CertificateCache, LatticeElem, LatticeSemidirect,
    ScheduledGroup, SeparabilityCertificate, SeparabilityTarget, SeparationOutcome, TheoremAMode, DEFAULT_BUDGET,
};
use crate::twisted::{
    central_class_intersection, class_partition, coincidence_derivation, finite_extension_decomposition,
    shift_to_identity, twisted_class, TwistedPair,
};
use crate::zoo::sol_matrix;

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Stage at which lattice samples are checked to lie outside their target.
pub const LATTICE_PROBE_STAGE: usize = 14;

/// Stage used to pick non-conjugate pairs for the double-coset runs. Kept low
/// because the product stages have squared order.
pub const DOUBLE_COSET_PROBE_STAGE: usize = 3;

/// Certificate stages for the lattice samples under [`DEFAULT_SEED`],
/// recorded from the first run.
pub const LATTICE_REGRESSION_STAGES: [usize; 25] =
    [0, 0, 0, 1, 0, 0, 0, 2, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub criterion: u32,
    pub name: String,
    pub status: Status,
    pub millis: u64,
    pub limit_millis: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub results: Vec<CriterionOutcome>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    /// Criterion number, name or tag (`nests`, `twisted`, `separability`).
    pub filter: Option<String>,
    pub seed: u64,
    pub cache: Option<PathBuf>,
    /// Report zero for every timing so that reports are reproducible.
    pub omit_timings: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { filter: None, seed: DEFAULT_SEED, cache: None, omit_timings: false }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub tag: &'static str,
    pub limit_secs: u64,
    run: fn(&CorpusOptions) -> Result<String>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "prenest_oracle", tag: "nests", limit_secs: 60, run: prenest_oracle },
        Criterion { id: 2, name: "theorem_a", tag: "nests", limit_secs: 120, run: theorem_a },
        Criterion { id: 3, name: "identity_class", tag: "nests", limit_secs: 60, run: identity_class },
        Criterion { id: 4, name: "reduction_lemma", tag: "twisted", limit_secs: 30, run: reduction_lemma },
        Criterion { id: 5, name: "finite_extension", tag: "twisted", limit_secs: 60, run: finite_extension },
        Criterion { id: 6, name: "coincidence_derivation", tag: "twisted", limit_secs: 60, run: derivation },
        Criterion { id: 7, name: "central_intersection", tag: "twisted", limit_secs: 30, run: central },
        Criterion { id: 8, name: "lattice_certificates", tag: "separability", limit_secs: 120, run: lattice_certs },
        Criterion { id: 9, name: "double_coset", tag: "separability", limit_secs: 120, run: double_coset },
        Criterion { id: 10, name: "quotient_closure", tag: "nests", limit_secs: 30, run: quotient_closure },
    ]
}

fn selected(c: &Criterion, filter: &Option<String>) -> bool {
    match filter {
        None => true,
        Some(f) => f == c.tag || f == c.name || f.parse::<u32>().ok() == Some(c.id),
    }
}

pub fn run_criterion(c: &Criterion, opts: &CorpusOptions) -> CriterionOutcome {
    let start = Instant::now();
    let result = (c.run)(opts);
    let millis = start.elapsed().as_millis() as u64;
    let limit_millis = c.limit_secs * 1000;
    let (ok, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    let in_time = millis <= limit_millis;
    if ok && !in_time {
        detail = format!("{detail}; exceeded time limit of {} s", c.limit_secs);
    }
    CriterionOutcome {
        criterion: c.id,
        name: c.name.to_string(),
        status: if ok && in_time { Status::Pass } else { Status::Fail },
        millis: if opts.omit_timings { 0 } else { millis },
        limit_millis,
        detail,
    }
}

pub fn run_corpus(opts: &CorpusOptions) -> CorpusReport {
    let results = criteria().iter().filter(|c| selected(c, &opts.filter)).map(|c| run_criterion(c, opts)).collect();
    CorpusReport { seed: opts.seed, results }
}

fn fail(msg: String) -> Error {
    Error::InvalidArgs(msg)
}

fn fixtures(max: usize) -> Vec<(String, GroupRef)> {
    small_groups(max)
}

/// Every `(φ, ψ)` built from the sampled homomorphism set.
fn hom_pairs(h: &GroupRef, g: &GroupRef, seed: u64) -> Vec<TwistedPair> {
    let homs = hom_sample(h, g, seed);
    let mut out = Vec::with_capacity(homs.len() * homs.len());
    for phi in &homs {
        for psi in &homs {
            out.push(TwistedPair::new(phi.clone(), psi.clone()).expect("same groups"));
        }
    }
    out
}

fn prenest_oracle(_: &CorpusOptions) -> Result<String> {
    let mut summary = Vec::new();
    for (name, g) in fixtures(4) {
        let oracle: BTreeSet<Vec<Pair>> = prenests_by_subset_scan(&g)?.into_iter().collect();
        let built: BTreeSet<Vec<Pair>> =
            all_prenests(&g, &Limits::default())?.iter().map(|p| p.pairs().to_vec()).collect();
        if oracle != built {
            return Err(fail(format!("{name}: oracle finds {} pre-nests, data give {}", oracle.len(), built.len())));
        }
        for p in all_prenests(&g, &Limits::default())? {
            let back = prenest_from_datum(&datum_from_prenest(&p)?)?;
            if back != p {
                return Err(fail(format!("{name}: round trip changed {:?}", p.pairs())));
            }
            let hp = hom_pair_from_nest(&p)?;
            if twisted_class(&hp.pair, 0)?.members != nest_of(&p) {
                return Err(fail(format!("{name}: realising pair misses nest of {:?}", p.pairs())));
            }
        }
        summary.push(format!("{name}:{}", oracle.len()));
    }
    Ok(format!("pre-nest counts {}", summary.join(" ")))
}

fn theorem_a(_: &CorpusOptions) -> Result<String> {
    let mut total = 0;
    for (name, g) in fixtures(8) {
        let r = verify_nest_tcc_correspondence(&g, TheoremAMode::Exhaustive)?;
        if !r.passed() || r.data_checked != r.data_total {
            return Err(fail(format!("{name}: {}", r.failures.join("; "))));
        }
        total += r.data_checked;
    }
    Ok(format!("{total} data over 14 groups, zero failures"))
}

fn identity_class(opts: &CorpusOptions) -> Result<String> {
    let groups = fixtures(6);
    let mut count = 0;
    for (hn, h) in &groups {
        for (gn, g) in &groups {
            for pair in hom_pairs(h, g, opts.seed) {
                let p = prenest_from_hom_pair(&pair);
                if nest_of(&p) != twisted_class(&pair, 0)?.members {
                    return Err(fail(format!("{hn} -> {gn}: nest differs from class of 1")));
                }
                let d = datum_from_prenest(&p)?;
                let (phi, psi) = (pair.phi(), pair.psi());
                let image = |f: &crate::group::Homomorphism, k: &Subgroup| -> Vec<Elem> {
                    let s: BTreeSet<Elem> = k.members().iter().map(|&x| f.apply(x)).collect();
                    s.into_iter().collect()
                };
                let whole = Subgroup::whole(h.clone());
                let expected =
                    [image(psi, &whole), image(psi, &phi.kernel()), image(phi, &whole), image(phi, &psi.kernel())];
                let got = [
                    d.side1().sub().members().to_vec(),
                    d.side1().kernel().members().to_vec(),
                    d.side2().sub().members().to_vec(),
                    d.side2().kernel().members().to_vec(),
                ];
                if expected != got {
                    return Err(fail(format!(
                        "{hn} -> {gn}: recovered S1, K1, S2, K2 differ from ψ(H), ψ(ker φ), φ(H), φ(ker ψ)"
                    )));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} homomorphism pairs"))
}

fn reduction_lemma(opts: &CorpusOptions) -> Result<String> {
    let groups = fixtures(6);
    let mut cases = 0;
    for (_, h) in &groups {
        for (gn, g) in &groups {
            for pair in hom_pairs(h, g, opts.seed) {
                let part = class_partition(&pair);
                for k in g.elements() {
                    let (shifted, _) = shift_to_identity(&pair, 0, k)?;
                    let one = twisted_class(&shifted, 0)?;
                    for x in g.elements() {
                        let (_, y) = shift_to_identity(&pair, x, k)?;
                        let lhs = part.class_of[x] == part.class_of[k];
                        if lhs != one.contains(y) {
                            return Err(fail(format!("{gn}: biconditional fails at g={x}, k={k}")));
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} (pair, g, k) cases"))
}

/// Least element of each coset, and the greatest, as two transversals.
fn transversals(g: &GroupRef, n: &Subgroup) -> Result<[Vec<Elem>; 2]> {
    let q = quotient(g, n)?;
    let least = q.representatives().to_vec();
    let greatest = q.target().elements().map(|c| *q.fiber(c).last().unwrap()).collect();
    Ok([least, greatest])
}

fn finite_extension(_: &CorpusOptions) -> Result<String> {
    let mut cases = 0;
    for (name, g) in fixtures(8) {
        let auts = automorphisms(&g);
        for n in all_normal_subgroups(&g, &Limits::default())? {
            let reps = transversals(&g, &n)?;
            for psi in &auts {
                if n.members().iter().any(|&x| !n.contains(psi.apply(x))) {
                    continue;
                }
                // [g]_ψ = {x g ψ(x)^-1} is the class of the pair (ψ, id)
                let pair = TwistedPair::new(psi.clone(), crate::group::Homomorphism::identity(&g))?;
                for x in g.elements() {
                    let class = twisted_class(&pair, x)?.members;
                    for r in &reps {
                        let terms = finite_extension_decomposition(&n, psi, x, r)?;
                        let union: BTreeSet<Elem> = terms.iter().flat_map(|t| t.translated_class(&g)).collect();
                        if union.into_iter().collect::<Vec<_>>() != class {
                            return Err(fail(format!("{name}: union differs from [g]_ψ at g={x}")));
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} (N, ψ, g, transversal) cases"))
}

/// Pairs used for the order-8 twisted checks: endomorphism pairs of each
/// fixture, and all pairs between fixtures of order at most 4.
fn twisted_pairs(seed: u64) -> Vec<(String, TwistedPair)> {
    let mut out = Vec::new();
    for (name, g) in fixtures(8) {
        for p in hom_pairs(&g, &g, seed) {
            out.push((name.clone(), p));
        }
    }
    let tiny = fixtures(4);
    for (hn, h) in &tiny {
        for (gn, g) in &tiny {
            if hn != gn {
                for p in hom_pairs(h, g, seed) {
                    out.push((format!("{hn}->{gn}"), p));
                }
            }
        }
    }
    out
}

fn derivation(opts: &CorpusOptions) -> Result<String> {
    let mut cases = 0;
    let mut normals: Vec<(GroupRef, Vec<Subgroup>)> = Vec::new();
    for (name, pair) in twisted_pairs(opts.seed) {
        let g = pair.g().clone();
        if !normals.iter().any(|(k, _)| Arc::ptr_eq(k, &g)) {
            normals.push((g.clone(), all_normal_subgroups(&g, &Limits::default())?));
        }
        let ns = &normals.iter().find(|(k, _)| Arc::ptr_eq(k, &g)).unwrap().1;
        let one = twisted_class(&pair, 0)?;
        for n in ns {
            let q = quotient(&g, n)?;
            let d = coincidence_derivation(n, &pair)?;
            let domain: Vec<Elem> =
                pair.h().elements().filter(|&h| q.apply(pair.phi().apply(h)) == q.apply(pair.psi().apply(h))).collect();
            if d.domain.members() != domain {
                return Err(fail(format!("{name}: domain is not Coin(φ̄, ψ̄)")));
            }
            if let Some((h1, h2)) = d.identity_violation(&pair) {
                return Err(fail(format!("{name}: derivation identity fails at ({h1}, {h2})")));
            }
            let expect: Vec<Elem> = n.members().iter().copied().filter(|&x| one.contains(x)).collect();
            if d.image != expect {
                return Err(fail(format!("{name}: image differs from N ∩ [1]")));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (pair, N) cases"))
}

fn central(opts: &CorpusOptions) -> Result<String> {
    let mut cases = 0;
    let mut centrals: Vec<(GroupRef, Vec<Subgroup>)> = Vec::new();
    for (name, pair) in twisted_pairs(opts.seed) {
        let g = pair.g().clone();
        if !centrals.iter().any(|(k, _)| Arc::ptr_eq(k, &g)) {
            let z = centre(&g);
            let cs = all_subgroups(&g, &Limits::default())?.into_iter().filter(|s| s.is_subset_of(&z)).collect();
            centrals.push((g.clone(), cs));
        }
        let cs = &centrals.iter().find(|(k, _)| Arc::ptr_eq(k, &g)).unwrap().1;
        let one = twisted_class(&pair, 0)?;
        for c in cs {
            let d = central_class_intersection(c, &pair)?;
            let expect: Vec<Elem> = c.members().iter().copied().filter(|&x| one.contains(x)).collect();
            if d.members() != expect {
                return Err(fail(format!("{name}: D differs from C ∩ [1]")));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (pair, C) cases"))
}

fn random_target(sg: &LatticeSemidirect, kind: usize, rng: &mut ChaCha8Rng) -> SeparabilityTarget<LatticeElem> {
    let mut r = || sg.random_elem(rng);
    match kind {
        0 => SeparabilityTarget::Singleton(r()),
        1 => SeparabilityTarget::Subgroup(vec![r(), r()]),
        2 => SeparabilityTarget::NormalClosure(vec![r()]),
        3 => SeparabilityTarget::ConjugacyClass(r()),
        4 => {
            let gens = sg.generators();
            let x = r();
            let xi = sg.inv(&x).unwrap();
            let inner: Vec<LatticeElem> = gens.iter().map(|s| sg.mul(&sg.mul(&x, s).unwrap(), &xi).unwrap()).collect();
            SeparabilityTarget::TwistedClass { phi: gens, psi: inner, base: r() }
        }
        _ => SeparabilityTarget::Nest { k1: vec![r()], k2: vec![r()], graph: vec![(r(), r())] },
    }
}

fn in_image_at<S: ScheduledGroup>(
    sg: &S,
    target: &SeparabilityTarget<S::Elem>,
    g: &S::Elem,
    index: usize,
) -> Result<bool> {
    let spec = orbit_spec(sg, target)?;
    let stage = sg.stage(index)?;
    let pairs: Vec<(usize, usize)> =
        spec.pairs.iter().map(|(a, b)| Ok((sg.project(&stage, a)?, sg.project(&stage, b)?))).collect::<Result<_>>()?;
    let (_, hit) = stage_orbit(&stage, sg.project(&stage, &spec.base)?, &pairs, Some(sg.project(&stage, g)?));
    Ok(hit)
}

fn reverify(sg: &LatticeSemidirect, c: &SeparabilityCertificate) -> Result<()> {
    let json = serde_json::to_string(c)?;
    let back: SeparabilityCertificate = serde_json::from_str(&json)?;
    verify_certificate(sg, &back)
}

/// Samples `(target, g)` pairs on the lattice group with `g` outside the
/// target's image at the probe stage.
pub fn lattice_samples(seed: u64, count: usize) -> Result<Vec<(SeparabilityTarget<LatticeElem>, LatticeElem)>> {
    let sg = lattice_semidirect_schedule(sol_matrix())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count {
            return Err(fail(format!("only {} samples fall outside their target at the probe stage", out.len())));
        }
        // kinds cycle so that every target shape is exercised
        let target = random_target(&sg, out.len() % 6, &mut rng);
        let g = sg.random_elem(&mut rng);
        if !in_image_at(&sg, &target, &g, LATTICE_PROBE_STAGE)? {
            out.push((target, g));
        }
    }
    Ok(out)
}

fn lattice_certs(opts: &CorpusOptions) -> Result<String> {
    let sg = lattice_semidirect_schedule(sol_matrix())?;
    let mut cache = match &opts.cache {
        Some(p) => Some(CertificateCache::open(p)?),
        None => None,
    };
    let mut stages = Vec::new();
    let mut kinds = BTreeSet::new();
    for (target, g) in lattice_samples(opts.seed, 25)? {
        let outcome = match cache.as_mut() {
            Some(c) => separate_cached(&sg, &target, &g, DEFAULT_BUDGET, c)?.0,
            None => separate(&sg, &target, &g, DEFAULT_BUDGET)?,
        };
        let SeparationOutcome::Certified(c) = outcome else {
            return Err(fail(format!("no certificate within {DEFAULT_BUDGET} stages for {}", sg.format_elem(&g))));
        };
        reverify(&sg, &c)?;
        kinds.insert(target.kind());
        stages.push(c.stage);
    }
    if opts.seed == DEFAULT_SEED && stages != LATTICE_REGRESSION_STAGES {
        return Err(fail(format!("stages {stages:?} differ from recorded {LATTICE_REGRESSION_STAGES:?}")));
    }
    Ok(format!("25/25 certified; kinds {kinds:?}; stages {stages:?}"))
}

/// Generator images of `φ` and `ψ`, then `g1`, `g2`.
pub type DoubleCosetCase = (Vec<LatticeElem>, Vec<LatticeElem>, LatticeElem, LatticeElem);

/// Seeded `(φ, ψ, g1, g2)` cases on the lattice group, `φ, ψ` identity or
/// inner, with `g1` outside the class of `g2` at the probe stage.
pub fn double_coset_cases(seed: u64, count: usize) -> Result<Vec<DoubleCosetCase>> {
    let sg = lattice_semidirect_schedule(sol_matrix())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let gens = sg.generators();
    let mut out = Vec::new();
    while out.len() < count {
        let endo = |rng: &mut ChaCha8Rng| -> Result<Vec<LatticeElem>> {
            if rng.gen_bool(0.5) {
                return Ok(gens.clone());
            }
            let x = sg.random_elem(rng);
            let xi = sg.inv(&x)?;
            gens.iter().map(|s| sg.mul(&sg.mul(&x, s)?, &xi)).collect()
        };
        let phi = endo(&mut rng)?;
        let psi = endo(&mut rng)?;
        let g1 = sg.random_elem(&mut rng);
        let g2 = sg.random_elem(&mut rng);
        let target = SeparabilityTarget::TwistedClass { phi: phi.clone(), psi: psi.clone(), base: g2.clone() };
        if g1 != g2 && !in_image_at(&sg, &target, &g1, DOUBLE_COSET_PROBE_STAGE)? {
            out.push((phi, psi, g1, g2));
        }
    }
    Ok(out)
}

fn double_coset(opts: &CorpusOptions) -> Result<String> {
    let sg = lattice_semidirect_schedule(sol_matrix())?;
    let mut pairs = Vec::new();
    for (phi, psi, g1, g2) in double_coset_cases(opts.seed, 10)? {
        let via_product = product_double_coset_separate(&sg, &sg, &phi, &psi, &g1, &g2, DEFAULT_BUDGET)?;
        let converted = via_product.converted.ok_or_else(|| fail("double-coset path exhausted its budget".into()))?;
        let target = SeparabilityTarget::TwistedClass { phi, psi, base: g2 };
        let direct = separate(&sg, &target, &g1, DEFAULT_BUDGET)?;
        let direct = direct.certificate().ok_or_else(|| fail("direct path exhausted its budget".into()))?;
        reverify(&sg, direct)?;
        reverify(&sg, &converted)?;
        if converted.stage != direct.stage {
            return Err(fail(format!("stages differ: double coset {} vs direct {}", converted.stage, direct.stage)));
        }
        pairs.push(direct.stage);
    }
    Ok(format!("10/10 certified on both paths; stages {pairs:?}"))
}

fn quotient_closure(_: &CorpusOptions) -> Result<String> {
    let limits = Limits::default();
    let mut cases = 0;
    for (name, g) in fixtures(8) {
        let prenests = all_prenests(&g, &limits)?;
        for n in all_normal_subgroups(&g, &limits)? {
            let q = quotient(&g, &n)?;
            for p in &prenests {
                let pushed = pushforward_prenest(p, &q)?;
                let image: BTreeSet<Elem> = nest_of(p).iter().map(|&x| q.apply(x)).collect();
                if nest_of(&pushed) != image.into_iter().collect::<Vec<_>>() {
                    return Err(fail(format!("{name}: q(nest) differs from nest of pushforward")));
                }
                cases += 1;
            }
            for pbar in all_prenests(q.target(), &limits)? {
                let pulled = pullback_prenest(&pbar, &q)?;
                let nbar = nest_of(&pbar);
                let pre: Vec<Elem> = g.elements().filter(|&x| nbar.binary_search(&q.apply(x)).is_ok()).collect();
                if nest_of(&pulled) != pre {
                    return Err(fail(format!("{name}: nest of pullback differs from preimage")));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} push/pull cases"))
}
