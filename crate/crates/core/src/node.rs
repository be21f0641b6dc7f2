//! One content router: Content Store, PIT, and the request counters that
//! feed connectivity and popularity.

use std::collections::HashMap;
use std::num::NonZeroUsize;

use lru::LruCache;

use crate::error::{Result, SimError};
use crate::packet::{ContentId, Data, Face, Interest, RequestId};
use crate::strategy::Verdict;
use crate::topology::NodeId;

/// LRU content cache holding content names only.
#[derive(Debug)]
pub struct ContentStore {
    entries: LruCache<ContentId, ()>,
}

impl ContentStore {
    pub fn new(capacity: usize) -> Result<Self> {
        let cap = NonZeroUsize::new(capacity)
            .ok_or_else(|| SimError::param("cache_size", capacity, "must be at least 1"))?;
        Ok(ContentStore {
            entries: LruCache::new(cap),
        })
    }

    pub fn capacity(&self) -> usize {
        self.entries.cap().get()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Membership test that leaves the recency order alone.
    pub fn contains(&self, content: ContentId) -> bool {
        self.entries.contains(&content)
    }

    /// Marks `content` most recently used; returns whether it was present.
    pub fn touch(&mut self, content: ContentId) -> bool {
        self.entries.get(&content).is_some()
    }

    /// Inserts (or refreshes) `content`, returning the evicted entry if any.
    pub fn insert(&mut self, content: ContentId) -> Option<ContentId> {
        match self.entries.push(content, ()) {
            Some((evicted, _)) if evicted != content => Some(evicted),
            _ => None,
        }
    }

    /// Entries from most to least recently used.
    pub fn iter_mru(&self) -> impl Iterator<Item = ContentId> + '_ {
        self.entries.iter().map(|(k, _)| *k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitRecord {
    pub face: Face,
    pub nonce: RequestId,
    pub arrived_at: f64,
}

/// Pending Interest Table.
///
/// With aggregation on, a second interest for a pending content is recorded
/// and suppressed; returning data satisfies every record of the content.
/// With aggregation off, every interest is forwarded and data satisfies only
/// the record whose nonce it carries.
#[derive(Debug, Default)]
pub struct PitTable {
    entries: HashMap<ContentId, Vec<PitRecord>>,
    aggregation: bool,
}

impl PitTable {
    pub fn new(aggregation: bool) -> Self {
        PitTable {
            entries: HashMap::new(),
            aggregation,
        }
    }

    pub fn aggregation(&self) -> bool {
        self.aggregation
    }

    pub fn is_pending(&self, content: ContentId) -> bool {
        self.entries.contains_key(&content)
    }

    pub fn records(&self, content: ContentId) -> &[PitRecord] {
        self.entries.get(&content).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn insert(&mut self, content: ContentId, record: PitRecord) {
        self.entries.entry(content).or_default().push(record);
    }

    /// Removes and returns the records satisfied by data for `content`
    /// carrying `nonce`. Empty when nothing matches.
    pub fn satisfy(&mut self, content: ContentId, nonce: RequestId) -> Vec<PitRecord> {
        if self.aggregation {
            return self.entries.remove(&content).unwrap_or_default();
        }
        let Some(records) = self.entries.get_mut(&content) else {
            return Vec::new();
        };
        let Some(pos) = records.iter().position(|r| r.nonce == nonce) else {
            return Vec::new();
        };
        let record = records.remove(pos);
        if records.is_empty() {
            self.entries.remove(&content);
        }
        vec![record]
    }

    /// Number of contents with pending records.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterestAction {
    /// Cache hit: data goes back on the arrival face, the interest is consumed.
    ReturnData,
    /// Another interest for the content is already pending upstream.
    Aggregate,
    /// Miss: forward toward the server.
    Forward,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataAction {
    /// Copies to send, one per satisfied PIT record.
    DeliverDownstream(Vec<PitRecord>),
    /// No PIT record matched; the packet was discarded.
    Dropped,
}

#[derive(Debug)]
pub struct NodeState {
    pub id: NodeId,
    pub store: ContentStore,
    pub pit: PitTable,
    path_count: u64,
    /// Indexed by content id; slot 0 is unused.
    request_counts: Vec<u32>,
    max_request_count: u32,
    orphan_data: u64,
}

impl NodeState {
    pub fn new(id: NodeId, cache_capacity: usize, catalog_size: usize, aggregation: bool) -> Result<Self> {
        Ok(NodeState {
            id,
            store: ContentStore::new(cache_capacity)?,
            pit: PitTable::new(aggregation),
            path_count: 0,
            request_counts: vec![0; catalog_size + 1],
            max_request_count: 0,
            orphan_data: 0,
        })
    }

    /// Interests this node has forwarded upstream.
    pub fn path_count(&self) -> u64 {
        self.path_count
    }

    pub fn request_count(&self, content: ContentId) -> u32 {
        self.request_counts.get(content as usize).copied().unwrap_or(0)
    }

    pub fn max_request_count(&self) -> u32 {
        self.max_request_count
    }

    pub fn orphan_data(&self) -> u64 {
        self.orphan_data
    }

    /// `C_S = c_S / network_max`, or 0 before any traffic.
    pub fn connectivity(&self, network_max: u64) -> f64 {
        if network_max == 0 {
            0.0
        } else {
            self.path_count as f64 / network_max as f64
        }
    }

    /// `P(k) = f_k / max_k' f_k'`, or 0 before any traffic.
    pub fn popularity(&self, content: ContentId) -> f64 {
        if self.max_request_count == 0 {
            0.0
        } else {
            self.request_count(content) as f64 / self.max_request_count as f64
        }
    }

    pub fn process_interest(&mut self, interest: &Interest, now: f64) -> Result<InterestAction> {
        match interest.path_trace.last() {
            None => return Err(SimError::MalformedPacket("interest with empty path trace".into())),
            Some(&at) if at != self.id => {
                return Err(SimError::MalformedPacket(format!(
                    "interest trace ends at node {at} but arrived at node {}",
                    self.id
                )))
            }
            Some(_) => {}
        }
        let content = interest.content;
        if content == 0 || content as usize >= self.request_counts.len() {
            return Err(SimError::MalformedPacket(format!("content id {content} outside catalog")));
        }
        if self.store.touch(content) {
            return Ok(InterestAction::ReturnData);
        }
        let record = PitRecord {
            face: interest.arrival_face(),
            nonce: interest.nonce,
            arrived_at: now,
        };
        if self.pit.aggregation() && self.pit.is_pending(content) {
            self.pit.insert(content, record);
            return Ok(InterestAction::Aggregate);
        }
        self.path_count += 1;
        let count = &mut self.request_counts[content as usize];
        *count += 1;
        self.max_request_count = self.max_request_count.max(*count);
        self.pit.insert(content, record);
        Ok(InterestAction::Forward)
    }

    pub fn process_data(&mut self, data: &Data, verdict: Verdict) -> DataAction {
        let records = self.pit.satisfy(data.content, data.nonce);
        if records.is_empty() {
            self.orphan_data += 1;
            return DataAction::Dropped;
        }
        if verdict == Verdict::Cache {
            self.store.insert(data.content);
        }
        DataAction::DeliverDownstream(records)
    }
}
