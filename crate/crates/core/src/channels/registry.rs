use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{AmplitudeDamping, Channel, Depolarizing, GeneralizedAmplitudeDamping, GenericKraus};

type Builder = fn(&[f64]) -> Result<Channel>;

/// A named channel family: parameter names plus a constructor.
#[derive(Clone)]
pub struct ChannelEntry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub summary: &'static str,
    pub build: Builder,
}

impl fmt::Debug for ChannelEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

/// Channel families selectable by name at runtime.
///
/// Specs use the mini-grammar `family[:param[:param]]`, e.g. `ad:0.2` or
/// `gad:0.5:0.3`.
#[derive(Debug, Clone, Default)]
pub struct ChannelRegistry {
    entries: BTreeMap<&'static str, ChannelEntry>,
}

impl ChannelRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry with `ad`, `gad`, `dep` and `identity`.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(ChannelEntry {
            name: "ad",
            params: &["gamma"],
            summary: "amplitude damping",
            build: |v| Ok(Arc::new(AmplitudeDamping::new(v[0])?)),
        });
        reg.register(ChannelEntry {
            name: "gad",
            params: &["gamma", "p"],
            summary: "generalised amplitude damping",
            build: |v| Ok(Arc::new(GeneralizedAmplitudeDamping::new(v[0], v[1])?)),
        });
        reg.register(ChannelEntry {
            name: "dep",
            params: &["lambda"],
            summary: "depolarising",
            build: |v| Ok(Arc::new(Depolarizing::new(v[0])?)),
        });
        reg.register(ChannelEntry {
            name: "identity",
            params: &[],
            summary: "identity channel (generic Kraus)",
            build: |_| Ok(Arc::new(GenericKraus::identity())),
        });
        reg
    }

    /// Adds or replaces an entry.
    pub fn register(&mut self, entry: ChannelEntry) {
        self.entries.insert(entry.name, entry);
    }

    pub fn get(&self, name: &str) -> Option<&ChannelEntry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    /// Builds a channel from positional parameters.
    pub fn build(&self, name: &str, params: &[f64]) -> Result<Channel> {
        let entry = self.get(name).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown channel `{name}` (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        if params.len() != entry.params.len() {
            return Err(Error::InvalidParameter(format!(
                "channel `{name}` takes {} parameter(s) ({}), got {}",
                entry.params.len(),
                entry.params.join(", "),
                params.len()
            )));
        }
        (entry.build)(params)
    }

    /// Builds a channel, looking each parameter up by name.
    pub fn build_named<F>(&self, name: &str, mut lookup: F) -> Result<Channel>
    where
        F: FnMut(&str) -> Option<f64>,
    {
        let entry = self
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown channel `{name}`")))?;
        let values = entry
            .params
            .iter()
            .map(|p| {
                lookup(p)
                    .ok_or_else(|| Error::InvalidParameter(format!("channel `{name}` needs --{p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        (entry.build)(&values)
    }

    /// Parses `family[:param[:param]]`.
    pub fn parse_spec(&self, spec: &str) -> Result<Channel> {
        let mut parts = spec.split(':');
        let name = parts.next().unwrap_or_default().trim();
        let params = parts
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("bad number `{s}` in channel spec `{spec}`"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.build(name, &params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let reg = ChannelRegistry::builtin();
        let gad = reg.parse_spec("gad:0.5:0.3").unwrap();
        assert_eq!(gad.name(), "gad");
        assert_eq!(gad.params(), vec![("gamma", 0.5), ("p", 0.3)]);
        assert_eq!(reg.parse_spec("identity").unwrap().name(), "identity");
        let ad = reg.parse_spec("ad:0.2").unwrap();
        assert_eq!(reg.parse_spec(&ad.spec()).unwrap().params(), ad.params());
    }

    #[test]
    fn rejects_bad_specs() {
        let reg = ChannelRegistry::builtin();
        assert!(reg.parse_spec("ad").is_err());
        assert!(reg.parse_spec("ad:0.2:0.3").is_err());
        assert!(reg.parse_spec("ad:x").is_err());
        assert!(reg.parse_spec("ad:1.5").is_err());
        assert!(reg.parse_spec("bogus:0.1").is_err());
    }

    #[test]
    fn named_lookup() {
        let reg = ChannelRegistry::builtin();
        let ch = reg
            .build_named("gad", |n| match n {
                "gamma" => Some(0.1),
                "p" => Some(0.9),
                _ => None,
            })
            .unwrap();
        assert_eq!(ch.params(), vec![("gamma", 0.1), ("p", 0.9)]);
        assert!(reg.build_named("dep", |_| None).is_err());
    }

    #[test]
    fn custom_entries_can_be_registered() {
        let mut reg = ChannelRegistry::empty();
        reg.register(ChannelEntry {
            name: "flat",
            params: &[],
            summary: "test",
            build: |_| Ok(Arc::new(Depolarizing::new(1.0)?)),
        });
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["flat"]);
        assert_eq!(reg.build("flat", &[]).unwrap().name(), "dep");
    }
}
