//! Composable event predicates with explicit monotonicity metadata.

use serde::{Deserialize, Serialize};

use crate::configuration::EdgeStates;
use crate::error::{Error, Result};
use crate::lattice::{Direction, Region};
use crate::unionfind::DisjointSets;

/// Predicate tree over edge states. Connection atoms use open paths of the
/// configuration itself; boundary wiring never creates a connection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Event {
    True,
    EdgeOpen { edge: usize },
    Connected { u: usize, v: usize },
    SetsConnected { a: Vec<usize>, b: Vec<usize> },
    Crossing { direction: Direction },
    And { args: Vec<Event> },
    Or { args: Vec<Event> },
    Not { arg: Box<Event> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    #[default]
    Unknown,
}

impl Event {
    pub fn edge_open(edge: usize) -> Self {
        Event::EdgeOpen { edge }
    }

    pub fn connected(u: usize, v: usize) -> Self {
        Event::Connected { u, v }
    }

    pub fn crossing(direction: Direction) -> Self {
        Event::Crossing { direction }
    }

    pub fn and(args: Vec<Event>) -> Self {
        Event::And { args }
    }

    pub fn or(args: Vec<Event>) -> Self {
        Event::Or { args }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(arg: Event) -> Self {
        Event::Not { arg: Box::new(arg) }
    }

    pub fn is_not_free(&self) -> bool {
        match self {
            Event::Not { .. } => false,
            Event::And { args } | Event::Or { args } => args.iter().all(Event::is_not_free),
            _ => true,
        }
    }

    fn validate(&self, region: &Region) -> Result<()> {
        let n = region.num_vertices();
        let bad = |what: String| Err(Error::InvalidParameter(what));
        match self {
            Event::True => Ok(()),
            Event::EdgeOpen { edge } if *edge >= region.num_edges() => bad(format!("edge {edge} out of range")),
            Event::EdgeOpen { .. } => Ok(()),
            Event::Connected { u, v } if *u >= n || *v >= n => bad(format!("vertex pair ({u},{v}) out of range")),
            Event::Connected { .. } => Ok(()),
            Event::SetsConnected { a, b } => {
                if a.iter().chain(b).any(|&v| v >= n) {
                    bad("vertex set out of range".into())
                } else {
                    Ok(())
                }
            }
            Event::Crossing { direction } => {
                let (s, t) = direction.sides();
                if region.side(s).is_empty() || region.side(t).is_empty() {
                    Err(Error::EmptySide(direction.label()))
                } else {
                    Ok(())
                }
            }
            Event::And { args } | Event::Or { args } => args.iter().try_for_each(|a| a.validate(region)),
            Event::Not { arg } => arg.validate(region),
        }
    }

    fn eval<S: EdgeStates + ?Sized>(&self, config: &S, region: &Region, sets: &mut Option<DisjointSets>) -> bool {
        match self {
            Event::True => true,
            Event::EdgeOpen { edge } => config.is_open(*edge),
            Event::Connected { u, v } => cluster_sets(config, region, sets).same(*u, *v),
            Event::SetsConnected { a, b } => {
                let ds = cluster_sets(config, region, sets);
                let roots: Vec<usize> = a.iter().map(|&x| ds.find(x)).collect();
                b.iter().any(|&y| {
                    let r = ds.find(y);
                    roots.contains(&r)
                })
            }
            Event::Crossing { direction } => {
                let (s, t) = direction.sides();
                let ds = cluster_sets(config, region, sets);
                let roots: Vec<usize> = region.side(s).iter().map(|&x| ds.find(x)).collect();
                region.side(t).iter().any(|&y| {
                    let r = ds.find(y);
                    roots.contains(&r)
                })
            }
            Event::And { args } => args.iter().all(|a| a.eval(config, region, sets)),
            Event::Or { args } => args.iter().any(|a| a.eval(config, region, sets)),
            Event::Not { arg } => !arg.eval(config, region, sets),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Event::True => "true".into(),
            Event::EdgeOpen { edge } => format!("open({edge})"),
            Event::Connected { u, v } => format!("conn({u};{v})"),
            Event::SetsConnected { a, b } => format!("setconn({}|{})", a.len(), b.len()),
            Event::Crossing { direction: Direction::Horizontal } => "Ch".into(),
            Event::Crossing { direction: Direction::Vertical } => "Cv".into(),
            Event::And { args } => format!("and({})", args.iter().map(Event::label).collect::<Vec<_>>().join(";")),
            Event::Or { args } => format!("or({})", args.iter().map(Event::label).collect::<Vec<_>>().join(";")),
            Event::Not { arg } => format!("not({})", arg.label()),
        }
    }
}

fn cluster_sets<'a, S: EdgeStates + ?Sized>(
    config: &S,
    region: &Region,
    sets: &'a mut Option<DisjointSets>,
) -> &'a mut DisjointSets {
    sets.get_or_insert_with(|| {
        let mut ds = DisjointSets::new(region.num_vertices());
        for (e, &(u, v)) in region.edges().iter().enumerate() {
            if config.is_open(e) {
                ds.union(u, v);
            }
        }
        ds
    })
}

/// An event tree plus its declared monotonicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventSpec {
    tree: Event,
    monotone: Monotonicity,
}

impl EventSpec {
    /// NOT-free trees are marked increasing (every atom is increasing).
    pub fn new(tree: Event) -> Self {
        let monotone = if tree.is_not_free() { Monotonicity::Increasing } else { Monotonicity::Unknown };
        Self { tree, monotone }
    }

    /// Parses an event tree from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(Self::new(serde_json::from_str(text)?))
    }

    /// Declares a monotonicity; `Increasing` requires a NOT-free tree and
    /// `Decreasing` the negation of one.
    pub fn with_monotonicity(tree: Event, monotone: Monotonicity) -> Result<Self> {
        match monotone {
            Monotonicity::Increasing if !tree.is_not_free() => {
                return Err(Error::InvalidMonotonicity("tree contains a negation".into()))
            }
            Monotonicity::Decreasing => match &tree {
                Event::Not { arg } if arg.is_not_free() => {}
                _ => return Err(Error::InvalidMonotonicity("expected the negation of a NOT-free tree".into())),
            },
            _ => {}
        }
        Ok(Self { tree, monotone })
    }

    pub fn edge_open(edge: usize) -> Self {
        Self::new(Event::edge_open(edge))
    }

    pub fn crossing(direction: Direction) -> Self {
        Self::new(Event::crossing(direction))
    }

    pub fn connected(u: usize, v: usize) -> Self {
        Self::new(Event::connected(u, v))
    }

    pub fn always() -> Self {
        Self::new(Event::True)
    }

    pub fn tree(&self) -> &Event {
        &self.tree
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotone
    }

    pub fn is_increasing(&self) -> bool {
        self.monotone == Monotonicity::Increasing
    }

    pub fn require_increasing(&self) -> Result<()> {
        if self.is_increasing() {
            Ok(())
        } else {
            Err(Error::NotIncreasing)
        }
    }

    pub fn validate(&self, region: &Region) -> Result<()> {
        self.tree.validate(region)
    }

    pub fn holds<S: EdgeStates + ?Sized>(&self, config: &S, region: &Region) -> bool {
        let mut sets = None;
        self.tree.eval(config, region, &mut sets)
    }

    /// The single crossing direction when the tree is one crossing atom.
    pub(crate) fn as_crossing(&self) -> Option<Direction> {
        match self.tree {
            Event::Crossing { direction } => Some(direction),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        self.tree.label()
    }
}

/// Named events loaded from a JSON family file:
/// `{"events": [{"name": "...", "event": {...}, "monotone": "increasing"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EventFamily {
    pub events: Vec<NamedEvent>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedEvent {
    pub name: String,
    pub event: Event,
    #[serde(default)]
    pub monotone: Option<Monotonicity>,
}

impl EventFamily {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the specs, validating each monotonicity declaration.
    pub fn specs(&self) -> Result<Vec<(String, EventSpec)>> {
        self.events
            .iter()
            .map(|ne| {
                let spec = match ne.monotone {
                    Some(m) => EventSpec::with_monotonicity(ne.event.clone(), m)?,
                    None => EventSpec::new(ne.event.clone()),
                };
                Ok((ne.name.clone(), spec))
            })
            .collect()
    }
}
