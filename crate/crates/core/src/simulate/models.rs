use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mmcc::BaseClusterer;

/// Fictitious clusterer over a planted structure.
///
/// Cases are laid out group by group. Each true group is either reported
/// whole (one part) or split at random into parts of the given sizes on
/// every fit. Cluster names are shuffled on every fit, since a real
/// clusterer's labels carry no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedPartition {
    groups: Vec<Vec<usize>>,
}

impl PlantedPartition {
    /// `groups[g]` lists the part sizes true group `g` is split into.
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.is_empty() || groups.iter().any(|g| g.is_empty() || g.contains(&0)) {
            return Err(Error::InvalidArgument("every group needs positive part sizes".into()));
        }
        Ok(Self { groups })
    }

    pub fn n(&self) -> usize {
        self.groups.iter().flatten().sum()
    }

    /// Number of clusters the model reports.
    pub fn k(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Draws one labeling of all cases.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut names: Vec<usize> = (0..self.k()).collect();
        names.shuffle(rng);
        let mut labels = Vec::with_capacity(self.n());
        let mut next = 0;
        for parts in &self.groups {
            let mut group: Vec<usize> = Vec::with_capacity(parts.iter().sum());
            for &size in parts {
                group.extend(std::iter::repeat_n(names[next], size));
                next += 1;
            }
            if parts.len() > 1 {
                group.shuffle(rng);
            }
            labels.extend(group);
        }
        labels
    }
}

impl<T> BaseClusterer<T> for PlantedPartition {
    type Model = Vec<usize>;

    fn fit<R: Rng + ?Sized>(&self, data: &[T], _sample: &[usize], _k: usize, rng: &mut R) -> Result<Vec<usize>> {
        if data.len() != self.n() {
            return Err(Error::LengthMismatch {
                left: self.n(),
                right: data.len(),
            });
        }
        Ok(self.draw(rng))
    }

    fn predict(&self, model: &Vec<usize>, _data: &[T]) -> Vec<usize> {
        model.clone()
    }
}

/// The cluster models of the consensus-versus-MMCC comparison, 100 cases
/// each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlantedScenario {
    /// One group of 100, modeled with three random clusters 50:49:1.
    Random50491,
    /// One group, two random clusters 99:1.
    Random991,
    /// One group, two random clusters 50:50.
    Random5050,
    /// One group, one cluster.
    Single100,
    /// Two true groups of 50, the second randomly split 49:1.
    Justified50Random491,
    /// Two true groups of 50.
    Justified5050,
}

impl PlantedScenario {
    pub const ALL: [PlantedScenario; 6] = [
        Self::Random50491,
        Self::Random991,
        Self::Random5050,
        Self::Single100,
        Self::Justified50Random491,
        Self::Justified5050,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Random50491 => "random 50:49:1",
            Self::Random991 => "random 99:1",
            Self::Random5050 => "random 50:50",
            Self::Single100 => "single 100",
            Self::Justified50Random491 => "justified 50 random 49:1",
            Self::Justified5050 => "justified 50:50",
        }
    }

    pub fn true_k(self) -> usize {
        match self {
            Self::Justified50Random491 | Self::Justified5050 => 2,
            _ => 1,
        }
    }

    pub fn model(self) -> PlantedPartition {
        let groups = match self {
            Self::Random50491 => vec![vec![50, 49, 1]],
            Self::Random991 => vec![vec![99, 1]],
            Self::Random5050 => vec![vec![50, 50]],
            Self::Single100 => vec![vec![100]],
            Self::Justified50Random491 => vec![vec![50], vec![49, 1]],
            Self::Justified5050 => vec![vec![50], vec![50]],
        };
        PlantedPartition::new(groups).expect("preset sizes are positive")
    }
}
