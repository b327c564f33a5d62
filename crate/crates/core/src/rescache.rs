//! Process-wide caches: relation bases and minimal free resolutions, keyed
//! by the (structurally compared) module. Resolutions extend incrementally,
//! so asking for a longer bound reuses every step already computed.

use crate::fpmodule::{minimal_generators, FpModule};
use crate::groebner::ModuleGB;
use crate::modelem::Matrix;
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

static GB_CACHE: LazyLock<Mutex<HashMap<FpModule, Arc<ModuleGB>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub fn relations_gb(m: &FpModule) -> Arc<ModuleGB> {
    if let Some(gb) = GB_CACHE.lock().unwrap().get(m) {
        return gb.clone();
    }
    let gb = Arc::new(m.ring.r_gb(m.rank().max(1), &m.relations.cols, false));
    GB_CACHE
        .lock()
        .unwrap()
        .entry(m.clone())
        .or_insert(gb)
        .clone()
}

/// A minimal graded free resolution of `module`, computed out to some bound:
/// F_len -> .. -> F_1 -> F_0 with differentials[i] the matrix of
/// d_{i+1}: F_{i+1} -> F_{i} and twists[i] the generator degrees of F_i.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub module: FpModule,
    pub twists: Vec<Vec<i64>>,
    pub differentials: Vec<Matrix>,
    /// True when the resolution terminates: ker(d_len) = 0, so every later
    /// free module is zero.
    pub complete: bool,
}

impl Resolution {
    /// Number of differentials computed (resolution reaches F_length).
    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// Rank of F_i; zero beyond a complete resolution.
    pub fn betti(&self, i: usize) -> usize {
        self.twists.get(i).map_or(0, |t| t.len())
    }

    /// Generator degrees of F_i (empty beyond a complete resolution).
    pub fn twist_row(&self, i: usize) -> &[i64] {
        self.twists.get(i).map_or(&[], |t| t.as_slice())
    }

    pub fn free_module(&self, i: usize) -> FpModule {
        FpModule::free(self.module.ring.clone(), self.twist_row(i).to_vec())
    }
}

struct ResState {
    twists: Vec<Vec<i64>>,
    diffs: Vec<Matrix>,
    complete: bool,
}

static RES_CACHE: LazyLock<Mutex<HashMap<FpModule, Arc<Mutex<ResState>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Minimal free resolution of m out to homological degree `bound` (i.e. with
/// differentials d_1..d_bound when the module resolves that far).
pub fn free_resolution(m: &FpModule, bound: usize) -> Resolution {
    let slot = {
        let mut cache = RES_CACHE.lock().unwrap();
        cache
            .entry(m.clone())
            .or_insert_with(|| {
                let data = m.minimal_data();
                let twists0 = data.module.gen_degrees.clone();
                let d1 = data.module.relations;
                let complete = d1.ncols() == 0;
                let mut twists = vec![twists0];
                let mut diffs = Vec::new();
                if !complete {
                    twists.push(
                        d1.cols
                            .iter()
                            .map(|c| c.homogeneous_degree(&twists[0]).unwrap())
                            .collect(),
                    );
                    diffs.push(d1);
                }
                Arc::new(Mutex::new(ResState { twists, diffs, complete }))
            })
            .clone()
    };

    let mut state = slot.lock().unwrap();
    while state.diffs.len() < bound && !state.complete {
        let n = state.diffs.len();
        // extend: kernel of d_n (columns in R^{rank of F_{n-1}})
        let ambient_rank = state.twists[n - 1].len();
        let cols = &state.diffs[n - 1].cols;
        let taus = m.ring.r_kernel(ambient_rank.max(1), cols);
        let reduced: Vec<_> = taus
            .iter()
            .map(|t| m.ring.reduce_elem(t))
            .filter(|t| !t.is_zero())
            .collect();
        let keep = minimal_generators(&m.ring, &state.twists[n], &reduced);
        if keep.is_empty() {
            state.complete = true;
            break;
        }
        let kept_cols: Vec<_> = keep.into_iter().map(|j| reduced[j].clone()).collect();
        let next_twists: Vec<i64> = kept_cols
            .iter()
            .map(|c| c.homogeneous_degree(&state.twists[n]).unwrap())
            .collect();
        let rank = state.twists[n].len();
        state.diffs.push(Matrix::new(rank, kept_cols));
        state.twists.push(next_twists);
    }

    let len = state.diffs.len().min(bound);
    Resolution {
        module: m.clone(),
        twists: state.twists[..=len.min(state.twists.len() - 1)].to_vec(),
        differentials: state.diffs[..len].to_vec(),
        complete: state.complete && bound >= state.diffs.len(),
    }
}

/// The n-th syzygy module from the minimal resolution; n = 0 is the minimal
/// presentation, and anything beyond a finished resolution is zero.
pub fn syzygy(m: &FpModule, n: usize) -> FpModule {
    let res = free_resolution(m, n + 1);
    if n >= res.twists.len() {
        debug_assert!(res.complete);
        return FpModule::zero(m.ring.clone());
    }
    let gen_degrees = res.twists[n].clone();
    let relations = res
        .differentials
        .get(n)
        .cloned()
        .unwrap_or_else(|| Matrix::zero(gen_degrees.len()));
    FpModule { ring: m.ring.clone(), gen_degrees, relations }
}
