//! TOML run manifests.
//!
//! ```toml
//! network = "bridge.net"        # or: signature = "bridge-sig.csv"
//! law = "exp:rate=1"
//! damage = "binomial:p=0.1"
//! grid = "0:3:61"               # optional, default auto
//! mode = "model-faithful"       # simulate only; or "mechanistic"
//! trials = 100000               # simulate only
//! seed = 7                      # simulate only
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use shocknet_core::sim::SimMode;
use shocknet_core::{DamageModel, FirstArrivalLaw, Network, SignatureKind, SignatureVector};

use crate::spec::{parse_damage, parse_grid, parse_law, GridSpec};
use crate::{csvio, netfile, parallel, Error, Result};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    network: Option<String>,
    signature: Option<String>,
    law: String,
    damage: String,
    grid: Option<String>,
    mode: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
}

/// Where the structure of the system comes from.
#[derive(Clone, Debug)]
pub enum Structure {
    Network(Network),
    /// Signatures read from a signature CSV.
    Signatures(Vec<SignatureVector>),
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub path: PathBuf,
    /// Verbatim manifest text, echoed into outputs.
    pub text: String,
    pub structure: Structure,
    pub law: FirstArrivalLaw,
    pub damage: DamageModel,
    pub grid: GridSpec,
    pub mode: Option<SimMode>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

pub fn parse_mode(name: &str) -> Result<SimMode> {
    match name {
        "model-faithful" => Ok(SimMode::ModelFaithful),
        "mechanistic" => Ok(SimMode::Mechanistic),
        other => Err(Error::Usage(format!("unknown mode `{other}`; expected model-faithful or mechanistic"))),
    }
}

pub fn mode_name(mode: SimMode) -> &'static str {
    match mode {
        SimMode::ModelFaithful => "model-faithful",
        SimMode::Mechanistic => "mechanistic",
    }
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Manifest::parse(&text, path)
    }

    /// Parses manifest text as if it had been read from `path`.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let name = path.display().to_string();
        let raw: RawManifest = toml::from_str(text).map_err(|e| Error::parse(&name, None, e.message().to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let structure = match (&raw.network, &raw.signature) {
            (Some(net), None) => Structure::Network(netfile::read_network(&base.join(net))?),
            (None, Some(sig)) => {
                let sig_path = base.join(sig);
                let sig_text = fs::read_to_string(&sig_path).map_err(|e| Error::io(&sig_path, e))?;
                Structure::Signatures(csvio::read_signatures(&sig_text, &sig_path.display().to_string())?)
            }
            _ => return Err(Error::parse(&name, None, "give exactly one of `network` or `signature`")),
        };
        let field = |what: &str, e: Error| Error::parse(&name, None, format!("{what}: {e}"));
        Ok(Manifest {
            path: path.to_path_buf(),
            text: text.to_string(),
            structure,
            law: parse_law(&raw.law, base).map_err(|e| field("law", e))?,
            damage: parse_damage(&raw.damage).map_err(|e| field("damage", e))?,
            grid: match &raw.grid {
                Some(g) => parse_grid(g).map_err(|e| field("grid", e))?,
                None => GridSpec::Auto,
            },
            mode: raw.mode.as_deref().map(parse_mode).transpose().map_err(|e| field("mode", e))?,
            trials: raw.trials,
            seed: raw.seed,
        })
    }

    /// The signature of the requested kind: computed exactly from the
    /// network, or looked up in the signature file.
    pub fn signature(&self, kind: SignatureKind) -> Result<SignatureVector> {
        match &self.structure {
            Structure::Network(net) => Ok(match kind {
                SignatureKind::Classical => shocknet_core::signature::classical_signature(net)?,
                SignatureKind::Tie => parallel::partition_tally(net, shocknet_core::partition::DEFAULT_ENUMERATION_LIMIT)?.tie_signature()?,
                SignatureKind::Fatal => parallel::partition_tally(net, shocknet_core::partition::DEFAULT_ENUMERATION_LIMIT)?.fatal_signature()?,
            }),
            Structure::Signatures(sigs) => sigs.iter().find(|s| s.kind() == kind).cloned().ok_or_else(|| {
                Error::Usage(format!("{}: signature file has no {kind} signature", self.path.display()))
            }),
        }
    }

    pub fn network(&self) -> Option<&Network> {
        match &self.structure {
            Structure::Network(net) => Some(net),
            Structure::Signatures(_) => None,
        }
    }

    /// The manifest as comment lines for output provenance.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![format!("manifest {}", self.path.display())];
        lines.extend(self.text.lines().filter(|l| !l.trim().is_empty()).map(|l| format!("  {l}")));
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(name);
        fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
        path
    }

    const NET: &str = "node a\nnode b\nnode c\nlink 1 a b\nlink 2 b c\nlink 3 b c\nterminals a c\n";

    #[test]
    fn loads_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "sp.net", NET);
        let m = write(
            dir.path(),
            "run.toml",
            "network = \"sp.net\"\nlaw = \"exp:rate=1\"\ndamage = \"binomial:p=0.1\"\nmode = \"mechanistic\"\nseed = 3\n",
        );
        let manifest = Manifest::load(&m).unwrap();
        assert_eq!(manifest.network().unwrap().link_count(), 3);
        assert_eq!(manifest.grid, GridSpec::Auto);
        assert_eq!(manifest.mode, Some(SimMode::Mechanistic));
        assert_eq!(manifest.seed, Some(3));
        assert_eq!(manifest.trials, None);
        let tie = manifest.signature(SignatureKind::Tie).unwrap();
        assert_eq!(tie.to_f64()[2], 0.0);
        assert_eq!(manifest.echo()[1], "  network = \"sp.net\"");
    }

    #[test]
    fn signature_file_structure() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "s.csv", "kind,index,numerator,denominator\ntie,1,1,2\ntie,2,1,2\n");
        let m = write(dir.path(), "run.toml", "signature = \"s.csv\"\nlaw = \"exp:rate=1\"\ndamage = \"one-per-shock\"\n");
        let manifest = Manifest::load(&m).unwrap();
        assert!(manifest.network().is_none());
        assert_eq!(manifest.signature(SignatureKind::Tie).unwrap().len(), 2);
        assert!(manifest.signature(SignatureKind::Fatal).unwrap_err().to_string().contains("no fatal signature"));
    }

    #[test]
    fn rejects_bad_manifests() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "sp.net", NET);
        let cases = [
            ("law = \"exp:rate=1\"\ndamage = \"fatal\"\n", "exactly one of"),
            ("network = \"sp.net\"\nlaw = \"exp:rate=1\"\ndamage = \"fatal\"\ncolour = 1\n", "unknown field"),
            ("network = \"sp.net\"\ndamage = \"fatal\"\n", "missing field `law`"),
            ("network = \"sp.net\"\nlaw = \"exp:rate=0\"\ndamage = \"fatal\"\n", "law:"),
            ("network = \"sp.net\"\nlaw = \"exp:rate=1\"\ndamage = \"fatal\"\nmode = \"fast\"\n", "unknown mode"),
            ("network = \"missing.net\"\nlaw = \"exp:rate=1\"\ndamage = \"fatal\"\n", "missing.net"),
        ];
        for (body, needle) in cases {
            let m = write(dir.path(), "bad.toml", body);
            let msg = Manifest::load(&m).unwrap_err().to_string();
            assert!(msg.contains(needle), "{msg}");
        }
    }
}
