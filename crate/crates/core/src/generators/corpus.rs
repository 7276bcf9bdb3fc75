//! Writes reduction outputs to disk as `<dir>/<family>/<params>/{instance,target_k,witness}.txt`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_rational::Ratio;

use super::{
    complete_transform, lift_to_complete, scale_to_c, x3c_to_hai, x3c_to_hatc_dich, x3c_to_hati_single_tie,
    x3c_to_maj_hai, x3c_to_sm, ReductionOutput, SmVariant,
};
use crate::error::Result;
use crate::io::{write_matching, write_x3c};
use crate::x3c::X3cInstance;

pub struct CorpusEntry {
    pub family: &'static str,
    pub params: String,
    pub output: ReductionOutput,
}

fn frac(c: Ratio<u64>) -> String {
    format!("c{}-{}", c.numer(), c.denom())
}

/// Completes a house allocation reduction, lifting its witness.
fn completed(r: ReductionOutput) -> Result<ReductionOutput> {
    let instance = complete_transform(&r.instance)?;
    let original = Arc::new(r.instance);
    let done = Arc::new(instance.clone());
    let witness = r.witness.map(|base| {
        Box::new(move |cover: &[usize]| lift_to_complete(&original, &done, &base(cover)?)) as super::WitnessFn
    });
    let mut names = r.names;
    let n = instance.n_agents();
    let m = instance.n_objects() - n;
    names.extend((1..=n).map(|i| (format!("o{}", m + i), format!("dummy_{i}"))));
    Ok(ReductionOutput { instance, k: r.k, names, pads: r.pads, witness })
}

/// Every reduction family, with one or two sample fractions where padding applies.
pub fn standard_corpus(x: &X3cInstance) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    let mut push = |family, params: String, output| out.push(CorpusEntry { family, params, output });
    push("hai", "base".into(), x3c_to_hai(x)?);
    push("maj-hai", "base".into(), x3c_to_maj_hai(x)?);
    for c in [Ratio::new(1, 4), Ratio::new(2, 3)] {
        push("hai-scaled", frac(c), scale_to_c(x3c_to_hai(x)?, c)?);
    }
    push("hai-complete", "base".into(), completed(x3c_to_hai(x)?)?);
    push("hati-single-tie", "base".into(), x3c_to_hati_single_tie(x, None)?);
    let c = Ratio::new(2, 5);
    push("hati-single-tie", frac(c), x3c_to_hati_single_tie(x, Some(c))?);
    push("hatc-dich", "base".into(), x3c_to_hatc_dich(x, None)?);
    let c = Ratio::new(3, 5);
    push("hatc-dich", frac(c), x3c_to_hatc_dich(x, Some(c))?);
    for v in [
        SmVariant::Base,
        SmVariant::MaxMajority,
        SmVariant::PathPads(Some(Ratio::new(2, 5))),
        SmVariant::RoommatesTriangles(Some(Ratio::new(3, 5))),
        SmVariant::SingleTie(Some(Ratio::new(3, 10))),
        SmVariant::DichotomousComplete(Some(Ratio::new(2, 5))),
    ] {
        let params = match v.fraction() {
            Some(c) => format!("{}-{}", v.name(), frac(c)),
            None => v.name().to_string(),
        };
        let family = if matches!(v, SmVariant::RoommatesTriangles(_)) { "sr" } else { "sm" };
        push(family, params, x3c_to_sm(x, v)?);
    }
    Ok(out)
}

/// Writes the standard corpus for `x` under `dir`; returns the entry directories.
/// `witness.txt` is written only when `x` has an exact cover.
pub fn write_corpus(dir: &Path, x: &X3cInstance) -> Result<Vec<PathBuf>> {
    let cover = x.find_cover();
    let mut written = Vec::new();
    for entry in standard_corpus(x)? {
        let d = dir.join(entry.family).join(&entry.params);
        fs::create_dir_all(&d)?;
        fs::write(d.join("instance.txt"), entry.output.instance_text())?;
        fs::write(d.join("target_k.txt"), format!("{}\n", entry.output.k))?;
        fs::write(d.join("source.x3c"), write_x3c(x))?;
        if let Some(cover) = &cover {
            let m = entry.output.witness(cover)?;
            fs::write(d.join("witness.txt"), write_matching(&entry.output.instance, &m))?;
        }
        written.push(d);
    }
    Ok(written)
}
