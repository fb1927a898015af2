//! Group specifications as read from JSON, and their realization.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{Abelian, CyclicExtension, ExtensionSpec, PotentExample};
use crate::engine::{Config, Group};
use crate::error::{Error, Result};
use crate::lazard::{builtin_generators, builtin_lie, parse_lie_ring, LieBuiltin, LieGroup};
use crate::nottingham::{realize_quotient, NottinghamQuotient, QuotientSpec};
use crate::pc::{self, parse_presentation, Builtin, PcGroup};

/// The family tag and its parameters. `file` fields name a source on disk
/// and must be read into `source` before realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Abelian {
        n: u32,
    },
    Nottingham {
        p: u32,
        k: u32,
    },
    NottinghamDiamond {
        p: u32,
        m: u32,
        /// `None` selects `W = N_{z_m}`.
        #[serde(default)]
        alpha: Option<u32>,
    },
    Pc {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        builtin: Option<Builtin>,
    },
    Lie {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        builtin: Option<LieBuiltin>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
    },
    PkQuotient {
        p: u64,
        k: u32,
        s: u64,
    },
    PkNonsplit {
        p: u64,
        k: u32,
        e: u32,
        m: u32,
    },
    PotentExample {
        p: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GroupSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive_threshold: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_budget: Option<u64>,
}

impl From<Family> for GroupSpec {
    fn from(family: Family) -> Self {
        GroupSpec { family, exhaustive_threshold: None, element_budget: None, rng_seed: None, search_budget: None }
    }
}

/// Random pairs of pairs tried before a randomized search gives up.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2000;

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn config(&self) -> Config {
        let mut c = Config::default();
        if let Some(t) = self.exhaustive_threshold {
            c.exhaustive_threshold = t;
        }
        if let Some(b) = self.element_budget {
            c.element_budget = b;
        }
        if let Some(s) = self.rng_seed {
            c.seed = s;
        }
        c
    }

    pub fn search_budget(&self) -> u64 {
        self.search_budget.unwrap_or(DEFAULT_SEARCH_BUDGET)
    }

    pub fn with_threshold(mut self, t: u64) -> Self {
        self.exhaustive_threshold = Some(t);
        self
    }

    /// Replaces `file` references by the text returned from `read`.
    pub fn resolve_files(&mut self, mut read: impl FnMut(&str) -> Result<String>) -> Result<()> {
        if let Family::Pc { file, source, .. } | Family::Lie { file, source, .. } = &mut self.family {
            if let Some(path) = file.take() {
                *source = Some(read(&path)?);
            }
        }
        Ok(())
    }

    /// A short label such as `nottingham p=5 k=7`.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Abelian { n } => format!("abelian n={n}"),
            Family::Nottingham { p, k } => format!("nottingham p={p} k={k}"),
            Family::NottinghamDiamond { p, m, alpha } => match alpha {
                Some(a) => format!("nottingham-diamond p={p} m={m} alpha={a}"),
                None => format!("nottingham-diamond p={p} m={m} W=N_z"),
            },
            Family::Pc { builtin: Some(b), .. } => format!("pc {}", serde_json::to_string(b).unwrap_or_default()),
            Family::Pc { .. } => "pc".into(),
            Family::Lie { builtin: Some(b), p, .. } => format!("lie {b:?} p={}", p.unwrap_or(0)),
            Family::Lie { .. } => "lie".into(),
            Family::PkQuotient { p, k, s } => format!("pk-quotient p={p} k={k} s={s}"),
            Family::PkNonsplit { p, k, e, m } => format!("pk-nonsplit p={p} k={k} e={e} m={m}"),
            Family::PotentExample { p } => format!("potent-example p={p}"),
        }
    }
}

/// The oracle behind a realized group, kept for family-specific structure.
#[derive(Debug, Clone)]
pub enum Handle {
    Abelian(Arc<Abelian>),
    Nottingham(Arc<NottinghamQuotient>),
    Pc(Arc<PcGroup>),
    Lie(Arc<LieGroup>),
    Extension(Arc<CyclicExtension>),
    Potent(Arc<PotentExample>),
}

#[derive(Debug)]
pub struct Realized {
    pub spec: GroupSpec,
    pub handle: Handle,
    pub group: Group,
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn one_of<'a>(source: &'a Option<String>, file: &Option<String>, builtin: bool, what: &str) -> Result<Option<&'a str>> {
    if file.is_some() {
        return Err(Error::Parameter(format!("{what} file reference was not resolved")));
    }
    match (source, builtin) {
        (Some(s), false) => Ok(Some(s)),
        (None, true) => Ok(None),
        _ => Err(Error::Parameter(format!("{what} needs exactly one of `file`, `source`, `builtin`"))),
    }
}

pub fn realize(spec: &GroupSpec) -> Result<Realized> {
    let config = spec.config();
    let (handle, group) = match &spec.family {
        Family::Abelian { n } => {
            if *n == 0 {
                return Err(Error::Parameter("n must be at least 1".into()));
            }
            let a = Arc::new(Abelian::new(*n));
            let g = Group::realize(a.clone(), a.generators(), names(&["a", "b"]), config)?;
            (Handle::Abelian(a), g)
        }
        Family::Nottingham { p, k } => {
            let (q, g) = realize_quotient(QuotientSpec::Full { p: *p, k: *k }, config)?;
            (Handle::Nottingham(q), g)
        }
        Family::NottinghamDiamond { p, m, alpha } => {
            let (q, g) = realize_quotient(QuotientSpec::Diamond { p: *p, m: *m, alpha: *alpha }, config)?;
            (Handle::Nottingham(q), g)
        }
        Family::Pc { file, source, builtin } => {
            let pres = match one_of(source, file, builtin.is_some(), "pc")? {
                Some(text) => parse_presentation(text)?,
                None => pc::builtin(builtin.expect("checked"))?,
            };
            let (oracle, g) = pc::realize(pres, config)?;
            (Handle::Pc(oracle), g)
        }
        Family::Lie { file, source, builtin, p } => {
            let (ring, gens) = match one_of(source, file, builtin.is_some(), "lie")? {
                Some(text) => {
                    let ring = parse_lie_ring(text)?;
                    let gens: Vec<_> = (0..ring.dim()).map(|i| ring.basis(i)).collect();
                    (ring, gens)
                }
                None => {
                    let which = builtin.expect("checked");
                    let p = p.ok_or_else(|| Error::Parameter("builtin Lie rings need `p`".into()))?;
                    let ring = builtin_lie(which, p)?;
                    let (a, b) = builtin_generators(which, &ring);
                    (ring, vec![a, b])
                }
            };
            let gen_names: Vec<String> = if gens.len() == 2 { names(&["a", "b"]) } else { ring.names().to_vec() };
            let lg = Arc::new(LieGroup::new(ring)?);
            let codes = gens.iter().map(|v| lg.encode(v)).collect();
            let g = Group::realize(lg.clone(), codes, gen_names, config)?;
            (Handle::Lie(lg), g)
        }
        Family::PkQuotient { p, k, s } => {
            let ext = Arc::new(CyclicExtension::split(*p, *k, *s)?);
            let g = Group::realize(ext.clone(), ext.generators(), names(&["t", "a1"]), config)?;
            (Handle::Extension(ext), g)
        }
        Family::PkNonsplit { p, k, e, m } => {
            let ext = Arc::new(CyclicExtension::nonsplit(ExtensionSpec { p: *p, k: *k, e: *e, m: *m })?);
            let g = Group::realize(ext.clone(), ext.generators(), names(&["u", "a1"]), config)?;
            (Handle::Extension(ext), g)
        }
        Family::PotentExample { p } => {
            let ex = Arc::new(PotentExample::new(*p)?);
            let last = format!("a{}", p - 1);
            let g = Group::realize(ex.clone(), ex.generators(), names(&["b", "a1", &last]), config)?;
            (Handle::Potent(ex), g)
        }
    };
    Ok(Realized { spec: spec.clone(), handle, group })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let spec = GroupSpec::from_json(r#"{"family":"nottingham","p":5,"k":7,"rng-seed":3}"#).unwrap();
        assert_eq!(spec.family, Family::Nottingham { p: 5, k: 7 });
        assert_eq!(spec.config().seed, 3);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(GroupSpec::from_json(&text).unwrap(), spec);
        let pc = GroupSpec::from_json(r#"{"family":"pc","builtin":{"name":"h34","p":5,"r":2}}"#).unwrap();
        assert_eq!(pc.family, Family::Pc { file: None, source: None, builtin: Some(Builtin::H34 { p: 5, r: 2 }) });
        assert!(matches!(GroupSpec::from_json(r#"{"family":"klein"}"#), Err(Error::Syntax { .. })));
    }

    #[test]
    fn realize_small_families() {
        let cases = [
            (Family::Abelian { n: 6 }, 36),
            (Family::Nottingham { p: 3, k: 5 }, 81),
            (Family::Pc { file: None, source: None, builtin: Some(Builtin::H34 { p: 5, r: 1 }) }, 3125),
            (Family::Lie { file: None, source: None, builtin: Some(LieBuiltin::L1), p: Some(5) }, 15625),
            (Family::PkQuotient { p: 5, k: 1, s: 4 }, 3125),
        ];
        for (family, order) in cases {
            let r = realize(&family.into()).unwrap();
            assert_eq!(r.group.order(), order);
        }
    }

    #[test]
    fn unresolved_file_is_rejected() {
        let mut spec: GroupSpec = Family::Pc { file: Some("x.pc".into()), source: None, builtin: None }.into();
        assert!(matches!(realize(&spec), Err(Error::Parameter(_))));
        spec.resolve_files(|_| Ok("p 5\ngen a 5\ngen b 5\n".into())).unwrap();
        assert_eq!(realize(&spec).unwrap().group.order(), 25);
    }
}
