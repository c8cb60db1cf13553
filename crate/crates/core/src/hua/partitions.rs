use crate::symcore::DimVector;
use std::fmt;

/// One integer partition per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IPartition {
    parts: Vec<Vec<u32>>,
}

impl IPartition {
    pub fn empty(n: usize) -> Self {
        IPartition { parts: vec![Vec::new(); n] }
    }

    /// Validates that each entry is weakly decreasing with positive parts.
    pub fn new(parts: Vec<Vec<u32>>) -> Option<Self> {
        for p in &parts {
            if p.iter().any(|&x| x == 0) || p.windows(2).any(|w| w[0] < w[1]) {
                return None;
            }
        }
        Some(IPartition { parts })
    }

    pub fn nvert(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(Vec::is_empty)
    }

    pub fn size(&self) -> DimVector {
        DimVector(self.parts.iter().map(|p| p.iter().sum()).collect())
    }

    /// Number of nonzero columns `nu_k`.
    pub fn length(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `nu_k` for `k >= 1`.
    pub fn column(&self, k: usize) -> DimVector {
        assert!(k >= 1);
        DimVector(self.parts.iter().map(|p| p.get(k - 1).copied().unwrap_or(0)).collect())
    }

    /// `nu_k - nu_{k+1}`.
    pub fn step(&self, k: usize) -> DimVector {
        self.column(k).checked_sub(&self.column(k + 1)).expect("partitions are weakly decreasing")
    }
}

impl fmt::Debug for IPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

/// A finite sequence of I-partitions, stored without trailing empties.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IPartitionSeq {
    nvert: usize,
    items: Vec<IPartition>,
}

impl IPartitionSeq {
    pub fn new(nvert: usize, mut items: Vec<IPartition>) -> Self {
        assert!(items.iter().all(|p| p.nvert() == nvert), "vertex count mismatch");
        while items.last().is_some_and(IPartition::is_empty) {
            items.pop();
        }
        IPartitionSeq { nvert, items }
    }

    pub fn items(&self) -> &[IPartition] {
        &self.items
    }

    pub fn nvert(&self) -> usize {
        self.nvert
    }

    pub fn size(&self) -> DimVector {
        self.items.iter().fold(DimVector::zero(self.nvert), |acc, p| acc.add(&p.size()))
    }

    pub fn length(&self) -> usize {
        self.items.iter().map(IPartition::length).max().unwrap_or(0)
    }

    /// `nu_k = sum_l nu^(l)_k`.
    pub fn column(&self, k: usize) -> DimVector {
        self.items.iter().fold(DimVector::zero(self.nvert), |acc, p| acc.add(&p.column(k)))
    }

    /// `v^(l)_k`, with `l` counted from 1; zero past the end of the sequence.
    pub fn step(&self, l: usize, k: usize) -> DimVector {
        match self.items.get(l - 1) {
            Some(p) => p.step(k),
            None => DimVector::zero(self.nvert),
        }
    }
}

/// Partitions of `n`, largest parts first: for n = 2 this gives (2), (1,1).
pub fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn partitions_up_to(n: u32) -> Vec<Vec<u32>> {
    (0..=n).flat_map(partitions_of).collect()
}

/// Every I-partition with `|nu| <= box`, in lexicographic order of the
/// per-vertex lists (each list ordered by size, then largest parts first).
pub fn enum_ipartitions(bx: &DimVector) -> Vec<IPartition> {
    let lists: Vec<Vec<Vec<u32>>> = bx.0.iter().map(|&b| partitions_up_to(b)).collect();
    let mut out = vec![Vec::new()];
    for list in &lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for p in list {
                let mut q: Vec<Vec<u32>> = prefix.clone();
                q.push(p.clone());
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter().map(|parts| IPartition { parts }).collect()
}

/// Every sequence of I-partitions with `|nu.| <= box`.
///
/// Sequences containing an empty entry before a nonempty one are left out:
/// their summand always vanishes, since `H(0, w)` is zero for `w != 0`.
pub fn enum_ipartition_seqs(bx: &DimVector) -> Vec<IPartitionSeq> {
    let n = bx.len();
    let nonempty: Vec<IPartition> = enum_ipartitions(bx).into_iter().filter(|p| !p.is_empty()).collect();
    let mut out = Vec::new();
    fn rec(
        n: usize,
        remaining: &DimVector,
        nonempty: &[IPartition],
        cur: &mut Vec<IPartition>,
        out: &mut Vec<IPartitionSeq>,
    ) {
        out.push(IPartitionSeq::new(n, cur.clone()));
        for p in nonempty {
            if let Some(rest) = remaining.checked_sub(&p.size()) {
                cur.push(p.clone());
                rec(n, &rest, nonempty, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, bx, &nonempty, &mut Vec::new(), &mut out);
    out
}
