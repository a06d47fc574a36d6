use alloc::format;
use alloc::vec::Vec;

use crate::decomposition::RegionId;
use crate::dynamics::DynamicsModel;
use crate::error::{Error, Result};
use crate::integrate::{default_substeps, propagate_ode, TrajectorySegment};
use crate::state::{ControlVec, StateVec};

pub type SlotId = u32;

/// Parent link of the root slot.
pub const ROOT: SlotId = u32::MAX;

/// Set membership of a tree node. Nodes staged by propagation but not yet
/// inserted form the unexplored set and live in the staging buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum NodeTag {
    Expand,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub state: StateVec,
    pub parent: SlotId,
    /// Control and duration of the incoming segment; unused for the root.
    pub control: ControlVec,
    pub dt: f64,
    pub region: RegionId,
}

/// Append-only node store with a fixed capacity. Slots are filled in
/// insertion order, so every parent has a smaller index than its children.
#[derive(Debug, Clone)]
pub struct TreeArena {
    capacity: usize,
    nodes: Vec<Node>,
    tags: Vec<NodeTag>,
}

impl TreeArena {
    pub fn new(capacity: usize, root: StateVec, root_region: RegionId, control_dim: usize) -> Self {
        let mut nodes = Vec::with_capacity(capacity.max(1));
        let mut tags = Vec::with_capacity(capacity.max(1));
        nodes.push(Node {
            state: root,
            parent: ROOT,
            control: ControlVec::zeros(control_dim),
            dt: 0.0,
            region: root_region,
        });
        tags.push(NodeTag::Expand);
        Self { capacity: capacity.max(1), nodes, tags }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn remaining(&self) -> usize {
        self.capacity - self.nodes.len()
    }

    pub fn is_full(&self) -> bool {
        self.nodes.len() >= self.capacity
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, slot: SlotId) -> &Node {
        &self.nodes[slot as usize]
    }

    pub fn tags(&self) -> &[NodeTag] {
        &self.tags
    }

    pub(crate) fn nodes_and_tags_mut(&mut self) -> (&[Node], &mut [NodeTag]) {
        (&self.nodes, &mut self.tags)
    }

    pub fn set_tag(&mut self, slot: SlotId, tag: NodeTag) {
        self.tags[slot as usize] = tag;
    }

    /// Appends an expansion-set node; `None` when the arena is full.
    pub fn push(&mut self, node: Node) -> Option<SlotId> {
        if self.is_full() {
            return None;
        }
        debug_assert!((node.parent as usize) < self.nodes.len());
        self.nodes.push(node);
        self.tags.push(NodeTag::Expand);
        Some((self.nodes.len() - 1) as SlotId)
    }

    pub fn count(&self, tag: NodeTag) -> usize {
        self.tags.iter().filter(|t| **t == tag).count()
    }

    /// Slots tagged `tag`, ascending.
    pub fn slots_with(&self, tag: NodeTag) -> Vec<SlotId> {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == tag)
            .map(|(i, _)| i as SlotId)
            .collect()
    }

    /// Number of segments between the root and `slot`.
    pub fn depth(&self, slot: SlotId) -> Result<usize> {
        Ok(self.lineage(slot)?.len())
    }

    /// Slots on the path root -> `slot`, excluding the root.
    pub fn lineage(&self, slot: SlotId) -> Result<Vec<SlotId>> {
        if slot as usize >= self.nodes.len() {
            return Err(Error::CorruptTree(format!("slot {slot} is empty")));
        }
        let mut chain = Vec::new();
        let mut cur = slot;
        while cur != 0 {
            let parent = self.nodes[cur as usize].parent;
            if parent == ROOT || parent >= cur {
                return Err(Error::CorruptTree(format!(
                    "slot {cur} has parent {parent}, expected a smaller index"
                )));
            }
            chain.push(cur);
            cur = parent;
        }
        chain.reverse();
        Ok(chain)
    }

    /// Re-propagates every segment on the root -> `slot` path.
    pub fn extract_trajectory<M: DynamicsModel + ?Sized>(
        &self,
        model: &M,
        slot: SlotId,
    ) -> Result<Vec<TrajectorySegment>> {
        let chain = self.lineage(slot)?;
        let mut out = Vec::with_capacity(chain.len());
        for s in chain {
            let node = &self.nodes[s as usize];
            let parent = &self.nodes[node.parent as usize];
            let seg = propagate_ode(model, &parent.state, &node.control, node.dt, default_substeps(node.dt))?;
            out.push(seg);
        }
        Ok(out)
    }

    /// Checks acyclicity and parent ordering over the whole arena.
    pub fn check_structure(&self) -> Result<()> {
        if self.nodes.is_empty() || self.nodes[0].parent != ROOT {
            return Err(Error::CorruptTree("slot 0 must be the root".into()));
        }
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            if n.parent == ROOT || n.parent as usize >= i {
                return Err(Error::CorruptTree(format!("slot {i} has parent {}", n.parent)));
            }
        }
        if self.tags.len() != self.nodes.len() || self.nodes.len() > self.capacity {
            return Err(Error::CorruptTree("tag mask out of sync".into()));
        }
        Ok(())
    }
}
