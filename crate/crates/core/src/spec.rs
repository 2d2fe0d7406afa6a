//! JSON descriptions of groups, homomorphisms, nest data and targets.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::{
    cyclic, dihedral, direct_product, group_from_permutations, inner_automorphism, parse_cycles, quaternion,
    semidirect_from_generators, subgroup_generated, symmetric, Elem, FiniteGroup, GroupRef, Homomorphism, Limits,
    Permutation,
};
use crate::nests::{CosetSpace, NestDatum};
use crate::separability::{
    lattice_semidirect_schedule, Integers, LatticeSemidirect, Matrix, ScheduledGroup, SeparabilityTarget,
};
use crate::zoo::{bs12_schedule, menth_truncation, sol_lattice_group, sol_matrix, Bs12};

/// An element given as a raw index or as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Index(usize),
    Text(String),
}

impl ElemSpec {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<Elem> {
        match self {
            ElemSpec::Index(k) => {
                g.check_elem(*k)?;
                Ok(*k)
            }
            ElemSpec::Text(t) => g.parse_elem(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermSpec {
    Images(Vec<usize>),
    Cycles(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        n: usize,
    },
    Sym {
        n: usize,
    },
    Dihedral {
        n: usize,
    },
    Quaternion,
    Perm {
        degree: usize,
        gens: Vec<PermSpec>,
    },
    Table {
        table: Vec<Vec<usize>>,
    },
    /// `N ⋊ H`; `action[i]` is the automorphism of `N` by which generator `i` of `H` acts.
    Semidirect {
        n: Box<GroupSpec>,
        h: Box<GroupSpec>,
        action: Vec<HomSpec>,
    },
    Direct {
        factors: Vec<GroupSpec>,
    },
    Zoo {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Matrix>,
    },
}

/// A group built from a spec: a table group or a scheduled infinite family.
#[derive(Clone, Debug)]
pub enum BuiltGroup {
    Finite(GroupRef),
    Integers(Integers),
    Lattice(LatticeSemidirect),
    Bs12(Bs12),
}

impl BuiltGroup {
    pub fn finite(&self) -> Option<&GroupRef> {
        match self {
            BuiltGroup::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn expect_finite(&self) -> Result<&GroupRef> {
        self.finite().ok_or_else(|| Error::InvalidArgs("this command needs a finite group".into()))
    }
}

fn small(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::InvalidArgs(format!("{n} is too large")))
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical JSON text, used as the family name of finite schedules.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    pub fn build(&self) -> Result<BuiltGroup> {
        if let GroupSpec::Zoo { name, m, p, matrix } = self {
            let reject = |what: &str| Err(Error::InvalidArgs(format!("zoo entry {name} takes no {what}")));
            match name.as_str() {
                "integers" | "bs12" => {
                    if m.is_some() || p.is_some() || matrix.is_some() {
                        return reject("parameters");
                    }
                    return Ok(if name == "integers" {
                        BuiltGroup::Integers(Integers)
                    } else {
                        BuiltGroup::Bs12(bs12_schedule())
                    });
                }
                "lattice" => {
                    if m.is_some() || p.is_some() {
                        return reject("m or p");
                    }
                    let a = matrix.clone().unwrap_or_else(sol_matrix);
                    return Ok(BuiltGroup::Lattice(lattice_semidirect_schedule(a)?));
                }
                _ => {}
            }
        }
        Ok(BuiltGroup::Finite(Arc::new(self.build_finite()?)))
    }

    pub fn build_finite(&self) -> Result<FiniteGroup> {
        let limits = Limits::default();
        match self {
            GroupSpec::Cyclic { n } => cyclic(*n),
            GroupSpec::Sym { n } => symmetric(*n),
            GroupSpec::Dihedral { n } => dihedral(*n),
            GroupSpec::Quaternion => Ok(quaternion()),
            GroupSpec::Perm { degree, gens } => {
                let perms = gens
                    .iter()
                    .map(|p| match p {
                        PermSpec::Images(v) => Permutation::from_images(v.clone()),
                        PermSpec::Cycles(s) => parse_cycles(*degree, s),
                    })
                    .collect::<Result<Vec<_>>>()?;
                group_from_permutations(*degree, &perms, &limits)
            }
            GroupSpec::Table { table } => FiniteGroup::from_table(table.clone()),
            GroupSpec::Semidirect { n, h, action } => {
                let n: GroupRef = Arc::new(n.build_finite()?);
                let h: GroupRef = Arc::new(h.build_finite()?);
                let action = action.iter().map(|a| a.resolve(&n, &n)).collect::<Result<Vec<_>>>()?;
                semidirect_from_generators(&n, &h, &action)
            }
            GroupSpec::Direct { factors } => {
                let mut acc: GroupRef = Arc::new(crate::group::trivial());
                for f in factors {
                    acc = Arc::new(direct_product(&acc, &Arc::new(f.build_finite()?)));
                }
                Ok((*acc).clone())
            }
            GroupSpec::Zoo { name, m, p, matrix } => match name.as_str() {
                "sol_lattice" => {
                    if p.is_some() || matrix.is_some() {
                        return Err(Error::InvalidArgs("sol_lattice takes only m".into()));
                    }
                    sol_lattice_group(small(m.unwrap_or(5))?)
                }
                "lattice_stage" => {
                    let a = matrix.clone().unwrap_or_else(sol_matrix);
                    crate::zoo::lattice_group(a, small(m.unwrap_or(2))?)
                }
                "menth" => {
                    if matrix.is_some() {
                        return Err(Error::InvalidArgs("menth takes p and m".into()));
                    }
                    menth_truncation(p.unwrap_or(2), m.unwrap_or(2))
                }
                "integers" | "bs12" | "lattice" => {
                    Err(Error::InvalidArgs(format!("{name} is infinite; it has no multiplication table")))
                }
                other => Err(Error::InvalidArgs(format!("unknown zoo entry {other:?}"))),
            },
        }
    }
}

/// A homomorphism: `"id"`, `"trivial"`, `"inner:<element>"` or explicit
/// generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomSpec {
    Named(String),
    Images {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gens: Option<Vec<ElemSpec>>,
        images: Vec<ElemSpec>,
    },
}

impl HomSpec {
    /// Parses a command-line value: a JSON object or a shorthand string.
    pub fn parse(text: &str) -> Result<HomSpec> {
        let t = text.trim();
        if t.starts_with('{') {
            Ok(serde_json::from_str(t)?)
        } else {
            Ok(HomSpec::Named(t.to_string()))
        }
    }

    pub fn resolve(&self, source: &GroupRef, target: &GroupRef) -> Result<Homomorphism> {
        match self {
            HomSpec::Named(name) => {
                let same = || {
                    if source.order() == target.order() && **source == **target {
                        Ok(())
                    } else {
                        Err(Error::InvalidArgs(format!("{name:?} needs the source and target groups to agree")))
                    }
                };
                if name == "id" || name == "identity" {
                    same()?;
                    return Homomorphism::new(source.clone(), target.clone(), source.elements().collect());
                }
                if name == "trivial" {
                    return Ok(Homomorphism::trivial(source, target));
                }
                if let Some(x) = name.strip_prefix("inner:") {
                    same()?;
                    let x = target.parse_elem(x)?;
                    let inner = inner_automorphism(target, x)?;
                    return Homomorphism::new(source.clone(), target.clone(), inner.images().to_vec());
                }
                Err(Error::Parse(format!("unknown homomorphism shorthand {name:?}")))
            }
            HomSpec::Images { gens, images } => {
                let gens: Vec<Elem> = match gens {
                    Some(g) => g.iter().map(|x| x.resolve(source)).collect::<Result<_>>()?,
                    None => source.gens().to_vec(),
                };
                if gens.len() != images.len() {
                    return Err(Error::MissingGeneratorImage(gens.len().min(images.len())));
                }
                let images: Vec<Elem> = images.iter().map(|x| x.resolve(target)).collect::<Result<_>>()?;
                let pairs: Vec<(Elem, Elem)> = gens.into_iter().zip(images).collect();
                Homomorphism::from_assignment(source, target, &pairs)
            }
        }
    }

    /// Images of the generators of a scheduled group `G` under an
    /// endomorphism given by this spec.
    pub fn resolve_scheduled<S: ScheduledGroup>(&self, sg: &S) -> Result<Vec<S::Elem>> {
        let gens = sg.generators();
        match self {
            HomSpec::Named(name) if name == "id" || name == "identity" => Ok(gens),
            HomSpec::Named(name) if name == "trivial" => Ok(vec![sg.identity(); gens.len()]),
            HomSpec::Named(name) => {
                let x = name
                    .strip_prefix("inner:")
                    .ok_or_else(|| Error::Parse(format!("unknown homomorphism shorthand {name:?}")))?;
                let x = sg.parse_elem(x)?;
                let xi = sg.inv(&x)?;
                gens.iter().map(|s| sg.mul(&sg.mul(&x, s)?, &xi)).collect()
            }
            HomSpec::Images { gens: Some(_), .. } => {
                Err(Error::InvalidArgs("for infinite groups give images of the standard generators only".into()))
            }
            HomSpec::Images { gens: None, images } => {
                if images.len() != gens.len() {
                    return Err(Error::MissingGeneratorImage(images.len()));
                }
                images
                    .iter()
                    .map(|x| match x {
                        ElemSpec::Text(t) => sg.parse_elem(t),
                        ElemSpec::Index(_) => Err(Error::Parse("infinite groups have no element indices".into())),
                    })
                    .collect()
            }
        }
    }
}

/// `{"s1":[..],"k1":[..],"s2":[..],"k2":[..],"theta":..}`; subgroups by
/// generators, `theta` mapping generators of `S1` to elements of `S2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSpec {
    pub s1: Vec<ElemSpec>,
    pub k1: Vec<ElemSpec>,
    pub s2: Vec<ElemSpec>,
    pub k2: Vec<ElemSpec>,
    pub theta: HomSpec,
    /// Only `"canonical"` (least element of each coset) is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<String>,
}

impl DatumSpec {
    pub fn resolve(&self, g: &GroupRef) -> Result<NestDatum> {
        if let Some(s) = &self.sections {
            if s != "canonical" {
                return Err(Error::DatumInvalid(format!("unsupported sections {s:?}")));
            }
        }
        let sub = |xs: &[ElemSpec]| -> Result<_> {
            let xs = xs.iter().map(|x| x.resolve(g)).collect::<Result<Vec<_>>>()?;
            subgroup_generated(g, &xs)
        };
        let s1 = sub(&self.s1)?;
        let s2 = sub(&self.s2)?;
        let side1 = CosetSpace::new(s1.clone(), sub(&self.k1)?)?;
        let side2 = CosetSpace::new(s2, sub(&self.k2)?)?;
        let assignment: Vec<(Elem, Elem)> = match &self.theta {
            HomSpec::Named(n) if n == "id" || n == "identity" => s1.members().iter().map(|&x| (x, x)).collect(),
            HomSpec::Named(n) if n == "trivial" => s1.members().iter().map(|&x| (x, 0)).collect(),
            HomSpec::Named(n) => return Err(Error::DatumInvalid(format!("unsupported θ shorthand {n:?}"))),
            HomSpec::Images { gens, images } => {
                let gens = gens.as_ref().ok_or_else(|| Error::DatumInvalid("θ needs explicit gens".into()))?;
                if gens.len() != images.len() {
                    return Err(Error::MissingGeneratorImage(gens.len().min(images.len())));
                }
                gens.iter().zip(images).map(|(x, y)| Ok((x.resolve(g)?, y.resolve(g)?))).collect::<Result<_>>()?
            }
        };
        NestDatum::from_assignment(side1, side2, &assignment)
    }
}

/// Parses a target, expanding `"id"` / `"inner:x"` shorthands in twisted
/// class images.
pub fn resolve_target<S: ScheduledGroup>(sg: &S, value: &Value) -> Result<SeparabilityTarget<S::Elem>> {
    let mut value = value.clone();
    if let Some(tc) = value.get_mut("twisted_class").and_then(Value::as_object_mut) {
        for key in ["phi", "psi"] {
            if let Some(Value::String(s)) = tc.get(key) {
                let images = HomSpec::Named(s.clone()).resolve_scheduled(sg)?;
                let texts: Vec<Value> = images.iter().map(|x| Value::String(sg.format_elem(x))).collect();
                tc.insert(key.to_string(), Value::Array(texts));
            }
        }
    }
    let target: SeparabilityTarget<String> = serde_json::from_value(value)?;
    target.try_map(|s| sg.parse_elem(s))
}
