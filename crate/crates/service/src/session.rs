use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use greenseq_core::{
    verify_sequence, ExchangeMatrix, GreenState, IntMatrix, MutationSequence, Symmetrizer,
};
use parking_lot::Mutex;
use serde::Serialize;
use uuid::Uuid;

use crate::error::ApiError;

pub struct Session {
    pub id: Uuid,
    pub initial: ExchangeMatrix,
    pub current: GreenState,
}

impl Session {
    pub fn new(initial: ExchangeMatrix) -> Self {
        Self {
            id: Uuid::new_v4(),
            current: GreenState::new(&initial),
            initial,
        }
    }

    pub fn mutate(&mut self, k: usize) -> Result<(), ApiError> {
        self.current = self.current.apply(k)?;
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), ApiError> {
        let mut history = self.current.history().clone();
        if history.pop().is_none() {
            return Err(ApiError::EmptyHistory);
        }
        let mut state = GreenState::new(&self.initial);
        for &k in history.indices() {
            state = state.apply(k)?;
        }
        self.current = state;
        Ok(())
    }

    pub fn snapshot(&self) -> Result<Snapshot, ApiError> {
        if !self.current.replays_from(&self.initial) {
            return Err(greenseq_core::Error::InternalSignViolation(format!(
                "session {} no longer matches its history",
                self.id
            ))
            .into());
        }
        let (greens, reds) = self.current.green_indices()?;
        let history = self.current.history().clone();
        let verdict = verify_sequence(&self.initial, &history)?;
        Ok(Snapshot {
            id: self.id.to_string(),
            n: self.initial.n(),
            b: self.current.b_matrix(),
            c: self.current.c_matrix(),
            all_red: greens.is_empty(),
            greens,
            reds,
            is_green_sequence_so_far: verdict.is_green_sequence,
            history,
            symmetrizer: self.initial.symmetrizer().clone(),
        })
    }
}

/// Full state of a session as sent to clients.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub id: String,
    pub n: usize,
    pub b: IntMatrix,
    pub c: IntMatrix,
    pub history: MutationSequence,
    pub greens: Vec<usize>,
    pub reds: Vec<usize>,
    pub all_red: bool,
    pub is_green_sequence_so_far: bool,
    pub symmetrizer: Symmetrizer,
}

pub type SessionHandle = Arc<tokio::sync::Mutex<Session>>;

struct Entry {
    session: SessionHandle,
    last_used: Instant,
}

/// In-memory sessions. Each session sits behind its own async mutex so that
/// requests to one session run one at a time.
pub struct SessionStore {
    entries: Mutex<HashMap<Uuid, Entry>>,
    idle_timeout: Duration,
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> Self {
        Self {
            entries: Mutex::new(HashMap::new()),
            idle_timeout,
        }
    }

    pub fn insert(&self, session: Session) -> SessionHandle {
        let id = session.id;
        let handle = Arc::new(tokio::sync::Mutex::new(session));
        let mut entries = self.entries.lock();
        entries.insert(
            id,
            Entry {
                session: handle.clone(),
                last_used: Instant::now(),
            },
        );
        handle
    }

    pub fn get(&self, id: &str) -> Result<SessionHandle, ApiError> {
        let unknown = || ApiError::UnknownSession(id.to_owned());
        let uuid = Uuid::parse_str(id).map_err(|_| unknown())?;
        let mut entries = self.entries.lock();
        let entry = entries.get_mut(&uuid).ok_or_else(unknown)?;
        if entry.last_used.elapsed() >= self.idle_timeout {
            entries.remove(&uuid);
            return Err(unknown());
        }
        entry.last_used = Instant::now();
        Ok(entry.session.clone())
    }

    /// Drops sessions idle for longer than the timeout and returns how many
    /// were removed.
    pub fn evict_idle(&self) -> usize {
        let mut entries = self.entries.lock();
        let before = entries.len();
        entries.retain(|_, e| e.last_used.elapsed() < self.idle_timeout);
        before - entries.len()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
