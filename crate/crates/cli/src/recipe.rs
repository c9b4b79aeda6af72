//! Recipe files: a header line followed by `key=value` pairs.
//!
//! ```text
//! # mrdrecipe v1
//! construction=construction1 q=2 m=4 m1=2 n=2 d=2
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mrd_core::constructions::{construction1, gabidulin, product, subtract_many, wedderburn_code, wedderburn_etas};
use mrd_core::io::{get_usize, parse_key_values, read_code};
use mrd_core::switching::{build_affine_rank_code, build_aperiodic_code, gabidulin_product};
use mrd_core::{Error, Extension, RankCode};

use crate::Failure;

pub const RECIPE_HEADER: &str = "# mrdrecipe v1";

pub struct Recipe {
    pub construction: String,
    kv: BTreeMap<String, String>,
    dir: PathBuf,
}

/// A built code, with its row-supported subcode when the construction has one.
pub struct Built {
    pub code: RankCode,
    pub subcode: Option<RankCode>,
}

impl Recipe {
    pub fn read(path: &Path) -> Result<Recipe, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some(RECIPE_HEADER) {
            return Err(Error::Parse(format!("missing `{RECIPE_HEADER}` header")).into());
        }
        let body: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
        let mut kv = parse_key_values(&body.join(" "))?;
        let construction = kv.remove("construction").ok_or_else(|| Error::Parse("missing `construction`".into()))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Recipe { construction, kv, dir })
    }

    fn num(&self, key: &str) -> Result<usize, Failure> {
        get_usize(&self.kv, key).map_err(Failure::from)
    }

    fn q(&self) -> Result<u32, Failure> {
        Ok(self.num("q")? as u32)
    }

    fn code_file(&self, key: &str) -> Result<RankCode, Failure> {
        let name = self.kv.get(key).ok_or_else(|| Error::Parse(format!("missing `{key}`")))?;
        let path = self.dir.join(name);
        let text = fs::read_to_string(&path).map_err(|e| Failure::io(&path, e))?;
        Ok(read_code(&text)?)
    }

    fn eta(&self, ext: &Extension) -> Result<Option<mrd_core::Elem>, Failure> {
        self.kv.get("eta").map(|s| ext.big().parse_elem(s)).transpose().map_err(Failure::from)
    }

    pub fn build(&self) -> Result<Built, Failure> {
        let only = |code| Ok(Built { code, subcode: None });
        match self.construction.as_str() {
            "gabidulin" => {
                let ext = Extension::new(self.q()?, self.num("m")?)?;
                only(gabidulin(&ext, self.num("n")?, self.num("k")?, None)?)
            }
            "construction1" => {
                let ext = Extension::new(self.q()?, self.num("m")?)?;
                let pair = construction1(&ext, self.num("m1")?, self.num("n")?, self.num("d")?, None, self.eta(&ext)?)?;
                Ok(Built { code: pair.code, subcode: Some(pair.subcode) })
            }
            "subtract-many" => {
                let pair = subtract_many(self.q()?, self.num("mu")?, self.num("l")?)?;
                Ok(Built { code: pair.code, subcode: Some(pair.subcode) })
            }
            "wedderburn" => {
                let ext = Extension::new(self.q()?, self.num("m")?)?;
                let n = self.num("n")?;
                let eta = match self.eta(&ext)? {
                    Some(e) => e,
                    None => *wedderburn_etas(&ext, n)?.first().ok_or(Error::EtaConditionViolated)?,
                };
                only(wedderburn_code(&ext, n, eta, None)?)
            }
            "product" => only(product(&self.code_file("top")?, &self.code_file("bottom")?)?),
            "gabidulin-product" => {
                only(gabidulin_product(self.q()?, self.num("m")?, self.num("n")?, self.num("d")?, self.num("rows")?)?)
            }
            "affine-rank" => only(build_affine_rank_code(
                self.q()?,
                self.num("m")?,
                self.num("n")?,
                self.num("d")?,
                self.num("target")?,
            )?),
            "aperiodic" => only(build_aperiodic_code(self.q()?, self.num("m")?, self.num("n")?, self.num("d")?)?),
            other => Err(Error::Parse(format!("unknown construction `{other}`")).into()),
        }
    }
}
