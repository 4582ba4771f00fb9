use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use crnpp_core::corpus::{self, CorpusProgram};
use crnpp_core::{parse, validate, Bindings, Number, ValidatedProgram};

/// Where a program came from, resolved before anything runs.
pub struct Source {
    /// Canonical path, or `corpus:<name>` for a bundled program.
    pub origin: String,
    /// File stem used to name outputs.
    pub stem: String,
    pub text: String,
    pub bundled: Option<&'static CorpusProgram>,
}

/// A path wins over a bundled program of the same name.
pub fn resolve(input: &str) -> Result<Source> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        let canonical = path.canonicalize().unwrap_or_else(|_| PathBuf::from(input));
        let stem = stem_of(path);
        let bundled = corpus::find(&stem).filter(|p| p.source == text);
        return Ok(Source { origin: canonical.display().to_string(), stem, text, bundled });
    }
    match corpus::find(input) {
        Some(p) => {
            let text = corpus::load_source(input).with_context(|| format!("loading bundled program `{input}`"))?;
            let origin = match corpus::override_dir() {
                Some(dir) => dir.join(format!("{input}.crnpp")).display().to_string(),
                None => format!("corpus:{input}"),
            };
            Ok(Source { origin, stem: input.to_string(), text, bundled: Some(p) })
        }
        None => bail!("`{input}` is neither a file nor a bundled program (see `crnpp corpus list`)"),
    }
}

fn stem_of(path: &Path) -> String {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "program".into());
    name.split('.').next().filter(|s| !s.is_empty()).unwrap_or("program").to_string()
}

pub fn is_compiled_network(input: &str) -> bool {
    input.ends_with(".json") && Path::new(input).exists()
}

/// Parses and validates, printing warnings to stderr. Errors carry every
/// diagnostic rendered against the input name.
pub fn load_program(src: &Source) -> Result<ValidatedProgram> {
    let render = |ds: Vec<crnpp_core::Diagnostic>| ds.iter().map(|d| d.render(&src.origin)).collect::<Vec<_>>().join("\n");
    let program = parse(&src.text).map_err(|ds| anyhow!("{}", render(ds)))?;
    let vp = validate(&program).map_err(|ds| anyhow!("{}", render(ds)))?;
    for w in vp.warnings() {
        eprintln!("{}", w.render(&src.origin));
    }
    Ok(vp)
}

/// Bundled defaults first, then `-p` overrides.
pub fn bindings(src: &Source, params: &[String]) -> Result<Bindings> {
    let mut b = src.bundled.map(|p| p.default_bindings()).unwrap_or_default();
    for p in params {
        let (name, value) = p.split_once('=').ok_or_else(|| anyhow!("parameter `{p}` is not of the form name=value"))?;
        let value: Number = value.trim().parse().map_err(|e| anyhow!("parameter `{name}`: {e}"))?;
        b.insert(name.trim().to_string(), value);
    }
    Ok(b)
}
