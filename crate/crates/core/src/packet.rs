use crate::topology::NodeId;

/// Content name; identical to its popularity rank, starting at 1.
pub type ContentId = u32;

/// Identifies one consumer request across the whole run.
pub type RequestId = u32;

/// Where a packet entered a node from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// The local consumer application that issued request `RequestId`.
    Consumer(RequestId),
    Node(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Satisfied from the Content Store of this router.
    Cache(NodeId),
    /// Satisfied by the origin server behind this router.
    Server(NodeId),
}

impl Origin {
    pub fn is_cache(&self) -> bool {
        matches!(self, Origin::Cache(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interest {
    pub content: ContentId,
    /// Request id of the consumer interest this packet carries.
    pub nonce: RequestId,
    pub origin_consumer: NodeId,
    /// Routers visited so far, the current one last.
    pub path_trace: Vec<NodeId>,
    pub issue_time: f64,
}

impl Interest {
    pub fn hop_count(&self) -> usize {
        self.path_trace.len().saturating_sub(1)
    }

    /// The face this interest arrived on at the last router of its trace.
    pub fn arrival_face(&self) -> Face {
        match self.path_trace.len() {
            0 | 1 => Face::Consumer(self.nonce),
            len => Face::Node(self.path_trace[len - 2]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Data {
    pub content: ContentId,
    /// Request id of the PIT record this copy is addressed to.
    pub nonce: RequestId,
    pub origin: Origin,
    /// Routers visited since the data was produced, the current one last.
    pub path_trace: Vec<NodeId>,
}

impl Data {
    pub fn hop_count(&self) -> usize {
        self.path_trace.len().saturating_sub(1)
    }
}
