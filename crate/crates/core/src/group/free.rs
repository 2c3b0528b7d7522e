use rand::Rng as _;
use serde::Deserialize;

use super::{AutGroup, Group, ReducedWord};
use crate::error::{Error, Result};
use crate::sampling::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1, "free group of rank 0");
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `raw` after checking every letter names a generator of this group.
    pub fn reduce(&self, raw: &[i32]) -> Result<ReducedWord> {
        if let Some(&bad) = raw
            .iter()
            .find(|x| **x == 0 || x.unsigned_abs() as usize > self.rank)
        {
            return Err(Error::GeneratorOutOfRange { index: bad, rank: self.rank });
        }
        ReducedWord::reduce(raw)
    }

    pub fn parse(&self, s: &str) -> Result<ReducedWord> {
        let w = ReducedWord::parse(s)?;
        self.reduce(w.letters())
    }

    /// Builds the automorphism sending generator `i` to `images[i-1]`; the
    /// inverse images are required so invertibility is witnessed, not assumed.
    pub fn automorphism(
        &self,
        images: Vec<ReducedWord>,
        inverse_images: Vec<ReducedWord>,
    ) -> Result<FreeAutomorphism> {
        if images.len() != self.rank || inverse_images.len() != self.rank {
            return Err(Error::Invalid(format!(
                "automorphism of F_{} needs {} generator images",
                self.rank, self.rank
            )));
        }
        for w in images.iter().chain(&inverse_images) {
            if w.max_generator() > self.rank {
                return Err(Error::MixedModel(w.to_string()));
            }
        }
        let phi = FreeAutomorphism { images, inverse_images };
        for i in 1..=self.rank as i32 {
            let x = ReducedWord::generator(i);
            if substitute(&phi.images, &substitute(&phi.inverse_images, &x)) != x
                || substitute(&phi.inverse_images, &substitute(&phi.images, &x)) != x
            {
                return Err(Error::Invalid(format!(
                    "inverse images do not invert the automorphism on {x}"
                )));
            }
        }
        Ok(phi)
    }

    /// Same as [`FreeGroup::automorphism`] with words given as strings.
    pub fn automorphism_from_strs(&self, images: &[&str], inverse_images: &[&str]) -> Result<FreeAutomorphism> {
        let parse = |v: &[&str]| v.iter().map(|s| self.parse(s)).collect::<Result<Vec<_>>>();
        self.automorphism(parse(images)?, parse(inverse_images)?)
    }

    /// Reads `{"generator_images": [..], "inverse_images": [..]}`, words in
    /// the apostrophe syntax.
    pub fn automorphism_from_json(&self, text: &str) -> Result<FreeAutomorphism> {
        let f: AutomorphismFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("automorphism file, line {} column {}: {e}", e.line(), e.column())))?;
        let images: Vec<&str> = f.generator_images.iter().map(String::as_str).collect();
        let inverse: Vec<&str> = f.inverse_images.iter().map(String::as_str).collect();
        self.automorphism_from_strs(&images, &inverse)
    }

    /// Exchanges the first two generators.
    pub fn swap(&self) -> FreeAutomorphism {
        assert!(self.rank >= 2);
        let mut images: Vec<_> = (1..=self.rank as i32).map(ReducedWord::generator).collect();
        images.swap(0, 1);
        FreeAutomorphism { inverse_images: images.clone(), images }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismFile {
    generator_images: Vec<String>,
    inverse_images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    images: Vec<ReducedWord>,
    inverse_images: Vec<ReducedWord>,
}

impl FreeAutomorphism {
    pub fn images(&self) -> &[ReducedWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[ReducedWord] {
        &self.inverse_images
    }
}

fn substitute(images: &[ReducedWord], g: &ReducedWord) -> ReducedWord {
    let mut out = ReducedWord::identity();
    for &x in g.letters() {
        let img = &images[x.unsigned_abs() as usize - 1];
        if x > 0 {
            out.extend_reduced(img.letters().iter().copied());
        } else {
            out.extend_reduced(img.letters().iter().rev().map(|y| -y));
        }
    }
    out
}

impl Group for FreeGroup {
    type Elem = ReducedWord;

    fn identity(&self) -> ReducedWord {
        ReducedWord::identity()
    }

    fn mul(&self, a: &ReducedWord, b: &ReducedWord) -> ReducedWord {
        a.mul(b)
    }

    fn inv(&self, a: &ReducedWord) -> ReducedWord {
        a.inverse()
    }

    fn contains(&self, a: &ReducedWord) -> bool {
        a.max_generator() <= self.rank
    }

    /// Reduced word of exactly `length` letters, drawn without backtracking.
    fn random_element(&self, rng: &mut Rng, length: usize) -> ReducedWord {
        let r = self.rank as i32;
        let mut letters: Vec<i32> = Vec::with_capacity(length);
        for _ in 0..length {
            let choices = if letters.is_empty() { 2 * r } else { 2 * r - 1 };
            let mut k = rng.gen_range(0..choices);
            let forbidden = letters.last().map(|x| -x);
            let mut x = 0;
            for cand in (1..=r).flat_map(|i| [i, -i]) {
                if Some(cand) == forbidden {
                    continue;
                }
                if k == 0 {
                    x = cand;
                    break;
                }
                k -= 1;
            }
            letters.push(x);
        }
        ReducedWord::from_reduced_unchecked(letters)
    }

    fn format_elem(&self, a: &ReducedWord) -> String {
        a.to_string()
    }

    fn power(&self, a: &ReducedWord, k: i64) -> Result<ReducedWord> {
        a.power(k)
    }
}

impl AutGroup for FreeGroup {
    type Aut = FreeAutomorphism;

    fn apply(&self, phi: &FreeAutomorphism, g: &ReducedWord) -> ReducedWord {
        substitute(&phi.images, g)
    }

    fn apply_inverse(&self, phi: &FreeAutomorphism, g: &ReducedWord) -> ReducedWord {
        substitute(&phi.inverse_images, g)
    }

    fn compose(&self, phi: &FreeAutomorphism, psi: &FreeAutomorphism) -> FreeAutomorphism {
        FreeAutomorphism {
            images: psi.images.iter().map(|w| substitute(&phi.images, w)).collect(),
            inverse_images: phi
                .inverse_images
                .iter()
                .map(|w| substitute(&psi.inverse_images, w))
                .collect(),
        }
    }

    fn inverse(&self, phi: &FreeAutomorphism) -> FreeAutomorphism {
        FreeAutomorphism {
            images: phi.inverse_images.clone(),
            inverse_images: phi.images.clone(),
        }
    }

    fn identity_aut(&self) -> FreeAutomorphism {
        let gens: Vec<_> = (1..=self.rank as i32).map(ReducedWord::generator).collect();
        FreeAutomorphism { images: gens.clone(), inverse_images: gens }
    }

    fn inner(&self, g: &ReducedWord) -> FreeAutomorphism {
        let gi = g.inverse();
        let conj = |a: &ReducedWord, b: &ReducedWord| {
            (1..=self.rank as i32)
                .map(|i| a.mul(&ReducedWord::generator(i)).mul(b))
                .collect::<Vec<_>>()
        };
        FreeAutomorphism { images: conj(g, &gi), inverse_images: conj(&gi, g) }
    }

    fn generators(&self) -> Vec<ReducedWord> {
        (1..=self.rank as i32).map(ReducedWord::generator).collect()
    }

    fn aut_from_maps(
        &self,
        forward: &dyn Fn(&ReducedWord) -> ReducedWord,
        backward: &dyn Fn(&ReducedWord) -> ReducedWord,
    ) -> Result<FreeAutomorphism> {
        let gens = self.generators();
        self.automorphism(
            gens.iter().map(forward).collect(),
            gens.iter().map(backward).collect(),
        )
    }
}
