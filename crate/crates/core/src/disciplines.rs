//! Queue scheduling policies.
//!
//! A [`ServerState`] owns the packets currently in the station and decides
//! which one receives service. Selection only ever looks at arrival order;
//! `service_req` and `remaining` are read solely to schedule the completion
//! event of the packet already chosen.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One update packet's lifecycle record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub id: u64,
    pub gen_time: f64,
    pub service_req: f64,
    pub remaining: f64,
    pub recv_time: Option<f64>,
    pub informative: bool,
}

impl Packet {
    pub fn new(id: u64, gen_time: f64, service_req: f64) -> Self {
        Packet {
            id,
            gen_time,
            service_req,
            remaining: service_req,
            recv_time: None,
            informative: false,
        }
    }

    /// `recv_time - gen_time`, once delivered.
    pub fn delay(&self) -> Option<f64> {
        self.recv_time.map(|r| r - self.gen_time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Discipline {
    #[serde(rename = "fcfs")]
    Fcfs,
    #[serde(rename = "lcfs-p")]
    LcfsPreemptiveResume,
    #[serde(rename = "lcfs-np")]
    LcfsNonPreemptive,
    #[serde(rename = "inf")]
    InfiniteServer,
}

impl Discipline {
    pub const ALL: [Discipline; 4] = [
        Discipline::Fcfs,
        Discipline::LcfsPreemptiveResume,
        Discipline::LcfsNonPreemptive,
        Discipline::InfiniteServer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Discipline::Fcfs => "fcfs",
            Discipline::LcfsPreemptiveResume => "lcfs-p",
            Discipline::LcfsNonPreemptive => "lcfs-np",
            Discipline::InfiniteServer => "inf",
        }
    }

    pub fn is_single_server(self) -> bool {
        !matches!(self, Discipline::InfiniteServer)
    }
}

impl FromStr for Discipline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fcfs" => Ok(Discipline::Fcfs),
            "lcfs-p" | "lcfsp" | "lcfs-pr" => Ok(Discipline::LcfsPreemptiveResume),
            "lcfs-np" | "lcfsnp" => Ok(Discipline::LcfsNonPreemptive),
            "inf" | "infinite" | "gg-inf" => Ok(Discipline::InfiniteServer),
            other => Err(Error::parse("discipline", format!("unknown discipline `{other}`"))),
        }
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
struct InService {
    pkt: Packet,
    finish: f64,
}

/// Infinite-server heap entry, earliest finish first, then lowest id.
#[derive(Debug, Clone, Copy)]
struct Running(InService);

impl PartialEq for Running {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Running {}

impl PartialOrd for Running {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Running {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .0
            .finish
            .total_cmp(&self.0.finish)
            .then_with(|| other.0.pkt.id.cmp(&self.0.pkt.id))
    }
}

/// Result of a completion event.
#[derive(Debug, Clone, Copy)]
pub struct Completion {
    pub done: Packet,
    /// Id of the packet that holds the (single) server afterwards, if any.
    pub next: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ServerState {
    discipline: Discipline,
    in_service: Option<InService>,
    /// FIFO queue for FCFS, stack (back = top) for the LCFS variants.
    waiting: VecDeque<Packet>,
    running: BinaryHeap<Running>,
}

impl ServerState {
    pub fn new(discipline: Discipline) -> Self {
        ServerState {
            discipline,
            in_service: None,
            waiting: VecDeque::new(),
            running: BinaryHeap::new(),
        }
    }

    pub fn discipline(&self) -> Discipline {
        self.discipline
    }

    pub fn is_idle(&self) -> bool {
        self.in_service.is_none() && self.running.is_empty()
    }

    pub fn in_system(&self) -> usize {
        usize::from(self.in_service.is_some()) + self.waiting.len() + self.running.len()
    }

    /// Packet currently holding the single server.
    pub fn serving(&self) -> Option<&Packet> {
        self.in_service.as_ref().map(|s| &s.pkt)
    }

    /// Packets waiting or suspended, in queue order (stack bottom first for LCFS).
    pub fn waiting(&self) -> impl Iterator<Item = &Packet> {
        self.waiting.iter()
    }

    /// Ids of packets in service on the infinite-server station.
    pub fn running_ids(&self) -> Vec<u64> {
        let mut ids: Vec<u64> = self.running.iter().map(|r| r.0.pkt.id).collect();
        ids.sort_unstable();
        ids
    }

    pub fn next_completion_time(&self) -> Option<f64> {
        match self.discipline {
            Discipline::InfiniteServer => self.running.peek().map(|r| r.0.finish),
            _ => self.in_service.map(|s| s.finish),
        }
    }

    fn start(pkt: Packet, now: f64) -> InService {
        // Rounding in preempt-resume bookkeeping must never let a packet
        // finish before gen_time + service_req.
        let finish = (now + pkt.remaining).max(pkt.gen_time + pkt.service_req);
        InService { pkt, finish }
    }

    pub fn handle_arrival(&mut self, pkt: Packet, now: f64) {
        debug_assert_eq!(pkt.gen_time, now);
        match self.discipline {
            Discipline::InfiniteServer => {
                let finish = pkt.gen_time + pkt.service_req;
                self.running.push(Running(InService { pkt, finish }));
            }
            Discipline::Fcfs | Discipline::LcfsNonPreemptive => {
                if self.in_service.is_none() {
                    self.in_service = Some(Self::start(pkt, now));
                } else {
                    self.waiting.push_back(pkt);
                }
            }
            Discipline::LcfsPreemptiveResume => {
                if let Some(cur) = self.in_service.take() {
                    let mut suspended = cur.pkt;
                    suspended.remaining = (cur.finish - now).clamp(0.0, suspended.service_req);
                    self.waiting.push_back(suspended);
                }
                self.in_service = Some(Self::start(pkt, now));
            }
        }
    }

    /// Completes the packet whose finish time is `now`, stamps its
    /// `recv_time`, and hands the server to the next packet.
    ///
    /// Panics if the station is empty.
    pub fn handle_completion(&mut self, now: f64) -> Completion {
        match self.discipline {
            Discipline::InfiniteServer => {
                let Running(s) = self.running.pop().expect("completion on an empty station");
                let mut done = s.pkt;
                done.remaining = 0.0;
                done.recv_time = Some(now);
                Completion { done, next: None }
            }
            _ => {
                let s = self.in_service.take().expect("completion on an idle server");
                let mut done = s.pkt;
                done.remaining = 0.0;
                done.recv_time = Some(now);
                let next = match self.discipline {
                    Discipline::Fcfs => self.waiting.pop_front(),
                    _ => self.waiting.pop_back(),
                };
                self.in_service = next.map(|p| Self::start(p, now));
                Completion {
                    done,
                    next: self.in_service.map(|s| s.pkt.id),
                }
            }
        }
    }
}
