//! Assignment trees of local automorphisms and the recursive build
//! A^1 = V^1, A^t = ⋃_{r ∈ V^t} (r + g_{r,…}(A^{t-1})), C = g(A^{m-1}).
//!
//! A tree holds, for each level t in 2..=m, one local automorphism per path
//! (i_t, …, i_{m-1}) of indices into the V^i enumerations. Paths are stored
//! flat with i_t varying fastest, so the collection indexed by V^t under a
//! fixed suffix is a contiguous run of |V^t| slots.

mod build;
mod sample;
mod treefile;

use std::fmt;

use crate::components::degenerate_raw;
use crate::error::{Error, Result};
use crate::isometries::{in_a, DRep, Isometry};
use crate::scaffold::{v_len, v_raw};
use crate::word::Space;

pub use build::{build_code, build_code_recursive, intermediate, puncture};
pub use sample::{rejection_rate, sample_tree, REJECTION_CAP};
pub use treefile::{parse_tree, serialize_tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Arbitrary elements of 𝒜^{t-1}.
    La1,
    /// Coset representatives from 𝒟^{t-1}.
    La2,
    /// Representatives with every collection nondegenerate.
    La3,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::La1 => "la1",
            Mode::La2 => "la2",
            Mode::La3 => "la3",
        }
    }

    pub fn uses_reps(self) -> bool {
        self != Mode::La1
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "la1" => Ok(Mode::La1),
            "la2" => Ok(Mode::La2),
            "la3" => Ok(Mode::La3),
            _ => Err(Error::Unsupported(format!("mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalAut {
    Raw(Isometry),
    Rep(DRep),
}

impl LocalAut {
    pub fn isometry(&self, s: &Space) -> Result<Isometry> {
        match self {
            LocalAut::Raw(g) => Ok(g.clone()),
            LocalAut::Rep(d) => d.realize(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Missing,
    WrongGroup,
    Degenerate,
    WrongKind,
}

/// First defect found in a tree. For `Degenerate`, `path` is the shared
/// suffix (i_{t+1}, …, i_{m-1}) of the offending collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub t: u32,
    pub path: Vec<usize>,
    pub kind: ViolationKind,
}

fn path_text(path: &[usize]) -> String {
    if path.is_empty() {
        "-".into()
    } else {
        path.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Missing => "missing assignment",
            ViolationKind::WrongGroup => "assignment outside the level group",
            ViolationKind::Degenerate => "degenerate collection",
            ViolationKind::WrongKind => "assignment kind does not match the mode",
        };
        let label = if self.kind == ViolationKind::Degenerate {
            "suffix"
        } else {
            "path"
        };
        write!(
            f,
            "{what} at t={} {label}={}",
            self.t,
            path_text(&self.path)
        )
    }
}

/// Lengths supported by trees: 8 (LA1 and LA2 only), 16 and 32.
pub fn check_tree_space(s: &Space, mode: Mode) -> Result<()> {
    match (s.n(), mode) {
        (8, Mode::La3) => Err(Error::Unsupported(
            "every collection is degenerate at length 8".into(),
        )),
        (8 | 16 | 32, _) => Ok(()),
        (n, _) => Err(Error::Unsupported(format!(
            "assignment trees of length {n}"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentTree {
    space: Space,
    mode: Mode,
    /// `levels[t - 2]` holds the level-t slots in flat path order.
    levels: Vec<Vec<Option<LocalAut>>>,
}

impl AssignmentTree {
    /// A tree with every slot unset.
    pub fn empty(space: Space, mode: Mode) -> Result<Self> {
        check_tree_space(&space, mode)?;
        let levels = (2..=space.m())
            .map(|t| vec![None; level_len(&space, t)])
            .collect();
        Ok(AssignmentTree {
            space,
            mode,
            levels,
        })
    }

    /// Every slot holds the identity (as a raw isometry or the identity
    /// representative).
    pub fn identity(space: Space, mode: Mode) -> Result<Self> {
        let mut tree = Self::empty(space, mode)?;
        for t in 2..=space.m() {
            let la = if mode.uses_reps() {
                LocalAut::Rep(DRep::identity(&space, t - 1)?)
            } else {
                LocalAut::Raw(Isometry::identity(space.n()))
            };
            tree.levels[(t - 2) as usize].fill(Some(la));
        }
        Ok(tree)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of slots at level t: ∏_{i=t}^{m-1} |V^i|.
    pub fn level_len(&self, t: u32) -> usize {
        level_len(&self.space, t)
    }

    fn check_t(&self, t: u32) -> Result<()> {
        self.space.check_level(t, self.space.m())?;
        if t < 2 {
            return Err(Error::LevelOutOfRange {
                t,
                max: self.space.m(),
            });
        }
        Ok(())
    }

    /// Flat index of the path (i_t, …, i_{m-1}).
    pub fn flat_index(&self, t: u32, path: &[usize]) -> Result<usize> {
        self.check_t(t)?;
        let m = self.space.m();
        if path.len() != (m - t) as usize {
            return Err(Error::Unsupported(format!(
                "level {t} paths have {} entries, got {}",
                m - t,
                path.len()
            )));
        }
        let mut index = 0usize;
        for (k, &i) in path.iter().enumerate().rev() {
            let size = v_len(&self.space, t + k as u32) as usize;
            if i >= size {
                return Err(Error::Unsupported(format!(
                    "path entry {i} out of range for V^{}",
                    t + k as u32
                )));
            }
            index = index * size + i;
        }
        Ok(index)
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn path_of(&self, t: u32, mut index: usize) -> Vec<usize> {
        (t..self.space.m())
            .map(|i| {
                let size = v_len(&self.space, i) as usize;
                let digit = index % size;
                index /= size;
                digit
            })
            .collect()
    }

    pub fn get(&self, t: u32, path: &[usize]) -> Result<Option<&LocalAut>> {
        let i = self.flat_index(t, path)?;
        Ok(self.levels[(t - 2) as usize][i].as_ref())
    }

    pub fn set(&mut self, t: u32, path: &[usize], la: LocalAut) -> Result<()> {
        let i = self.flat_index(t, path)?;
        self.levels[(t - 2) as usize][i] = Some(la);
        Ok(())
    }

    pub(crate) fn slot(&self, t: u32, index: usize) -> Option<&LocalAut> {
        self.levels[(t - 2) as usize][index].as_ref()
    }

    pub(crate) fn set_slot(&mut self, t: u32, index: usize, la: LocalAut) {
        self.levels[(t - 2) as usize][index] = Some(la);
    }

    /// Every slot realized as an isometry; the tree must be complete.
    pub(crate) fn realized(&self) -> Vec<Vec<Isometry>> {
        self.levels
            .iter()
            .map(|slots| {
                slots
                    .iter()
                    .map(|la| match la.as_ref().expect("complete tree") {
                        LocalAut::Raw(g) => g.clone(),
                        LocalAut::Rep(d) => d.realize_unchecked(&self.space),
                    })
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn level_len(s: &Space, t: u32) -> usize {
    (t..s.m()).map(|i| v_len(s, i) as usize).product()
}

/// Checks slot presence, kinds and group membership, then for LA3 the
/// nondegeneracy of every collection. Reports the first violation in
/// (t, flat path) order.
pub fn validate_tree(tree: &AssignmentTree) -> std::result::Result<(), Violation> {
    let s = &tree.space;
    let m = s.m();
    for t in 2..=m {
        for (i, slot) in tree.levels[(t - 2) as usize].iter().enumerate() {
            let violation = |kind| Violation {
                t,
                path: tree.path_of(t, i),
                kind,
            };
            let Some(la) = slot else {
                return Err(violation(ViolationKind::Missing));
            };
            let ok = match (la, tree.mode.uses_reps()) {
                (LocalAut::Raw(g), false) => g.n() == s.n() && in_a(s, g, t - 1).unwrap_or(false),
                (LocalAut::Rep(d), true) => d.level() == t - 1 && d.validate(s).is_ok(),
                _ => return Err(violation(ViolationKind::WrongKind)),
            };
            if !ok {
                return Err(violation(ViolationKind::WrongGroup));
            }
        }
    }
    if tree.mode == Mode::La3 {
        let realized = tree.realized();
        for t in 2..m {
            let l = v_raw(s, t);
            for (c, chunk) in realized[(t - 2) as usize].chunks(l.len()).enumerate() {
                let maps: Vec<&Isometry> = chunk.iter().collect();
                if degenerate_raw(&l, &maps) {
                    return Err(Violation {
                        t,
                        path: tree.path_of(t + 1, c),
                        kind: ViolationKind::Degenerate,
                    });
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn ensure_valid(tree: &AssignmentTree) -> Result<()> {
    validate_tree(tree).map_err(Error::InvalidTree)
}
