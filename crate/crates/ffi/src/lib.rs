//! C ABI over the congestion-gibbs samplers.
//!
//! Every fallible call returns a [`CgStatus`]; on failure the message is kept
//! per thread and can be copied out with [`cg_last_error_message`]. Games are
//! opaque handles created by [`cg_game_parse`] and released by
//! [`cg_game_free`]. Samples come back as row-major `count x players` arrays
//! of strategy indices.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use congestion_gibbs::cap_uniform::{exact_bipartite_count, mckay_estimate, CapGibbsSampler, DegreeSequence, WeightMode};
use congestion_gibbs::dynamics::{run_independent_chains, ChainConfig, Dynamics};
use congestion_gibbs::game::parse::parse_game;
use congestion_gibbs::game::{CongestionGame, StrategyProfile};
use congestion_gibbs::gibbs_ep::{EpGibbsSampler, PneSampler};
use congestion_gibbs::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGame = 4,
    InvalidArgument = 5,
    Unsupported = 6,
    Infeasible = 7,
    GuardExceeded = 8,
    SamplingFailed = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Second-stage weights for capacitated k-uniform games.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgWeightMode {
    Exact = 0,
    Mckay = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgDynamics {
    Logit = 0,
    RelaxedLogit = 1,
}

/// Opaque game handle.
pub struct CgGame {
    inner: CongestionGame,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> CgStatus {
    match e {
        Error::Parse { .. } => CgStatus::ParseError,
        Error::InvalidGame(_) => CgStatus::InvalidGame,
        Error::InvalidArgument(_) => CgStatus::InvalidArgument,
        Error::Unsupported(_) => CgStatus::Unsupported,
        Error::Infeasible(_) => CgStatus::Infeasible,
        Error::GuardExceeded(_) => CgStatus::GuardExceeded,
        Error::ZeroWeight | Error::NoConvergence(_) | Error::RerunCapExceeded(_) => CgStatus::SamplingFailed,
        Error::Io(_) => CgStatus::InvalidArgument,
    }
}

struct Failure(CgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            CgStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn game_ref<'a>(game: *const CgGame) -> Result<&'a CongestionGame, Failure> {
    game.as_ref().map(|g| &g.inner).ok_or_else(|| null("game"))
}

unsafe fn input<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn output<'a, T>(data: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len < needed {
        return Err(Failure(
            CgStatus::BufferTooSmall,
            format!("{what} holds {len} entries, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(data, needed))
}

fn write_profiles(profiles: &[StrategyProfile], out: &mut [usize]) {
    let mut at = 0;
    for s in profiles {
        out[at..at + s.len()].copy_from_slice(s.choices());
        at += s.len();
    }
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating if needed. Returns the message length
/// without the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses a game description. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_game_parse(text: *const c_char, out: *mut *mut CgGame) -> CgStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(CgStatus::InvalidUtf8, e.to_string()))?;
        let game = parse_game(text)?;
        *out = Box::into_raw(Box::new(CgGame { inner: game }));
        Ok(())
    })
}

/// Releases a handle from [`cg_game_parse`]. Null is ignored.
///
/// # Safety
/// `game` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_game_free(game: *mut CgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of players, or 0 for a null handle.
///
/// # Safety
/// `game` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_game_players(game: *const CgGame) -> usize {
    game.as_ref().map_or(0, |g| g.inner.players())
}

/// Number of strategies of `player`, or 0 if out of range.
///
/// # Safety
/// `game` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_game_strategies(game: *const CgGame, player: usize) -> usize {
    match game.as_ref() {
        Some(g) if player < g.inner.players() => g.inner.num_strategies(player),
        _ => 0,
    }
}

fn profile_from(game: &CongestionGame, choices: &[usize]) -> Result<StrategyProfile, Failure> {
    let s = StrategyProfile::new(choices.to_vec());
    game.validate_profile(&s)?;
    Ok(s)
}

/// Rosenthal's potential of a profile; `+inf` when a capacity is exceeded.
///
/// # Safety
/// `choices` must hold `len` entries and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cg_game_potential(
    game: *const CgGame,
    choices: *const usize,
    len: usize,
    out: *mut f64,
) -> CgStatus {
    guard(|| {
        let game = game_ref(game)?;
        let s = profile_from(game, input(choices, len, "choices")?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = game.potential(&s).to_f64();
        Ok(())
    })
}

/// Whether a profile is a pure Nash equilibrium.
///
/// # Safety
/// `choices` must hold `len` entries and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cg_game_is_nash(
    game: *const CgGame,
    choices: *const usize,
    len: usize,
    out: *mut bool,
) -> CgStatus {
    guard(|| {
        let game = game_ref(game)?;
        let s = profile_from(game, input(choices, len, "choices")?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = game.is_nash(&s);
        Ok(())
    })
}

/// Draws `count` approximate Gibbs samples at temperature `temperature` into
/// `out` (`count * players` entries). `mode` only matters for k-uniform games.
///
/// # Safety
/// `game` must be a live handle and `out` valid for `out_len` entries.
#[no_mangle]
pub unsafe extern "C" fn cg_sample_gibbs(
    game: *const CgGame,
    temperature: f64,
    eps: f64,
    mix_constant: f64,
    mode: CgWeightMode,
    seed: u64,
    count: usize,
    out: *mut usize,
    out_len: usize,
) -> CgStatus {
    guard(|| {
        let game = game_ref(game)?;
        let dest = output(out, out_len, count * game.players(), "out")?;
        let samples = if game.is_ep() {
            EpGibbsSampler::new(game, temperature, eps, mix_constant)?.sample_many(count, seed)?
        } else {
            let mode = match mode {
                CgWeightMode::Exact => WeightMode::Exact,
                CgWeightMode::Mckay => WeightMode::McKay,
            };
            CapGibbsSampler::new(game, temperature, eps, mix_constant, mode)?.sample_many(count, seed)?
        };
        write_profiles(&samples, dest);
        Ok(())
    })
}

/// Draws `count` approximately uniform pure Nash equilibria. `attempts`, if
/// not null, receives the number of chain runs each draw took.
///
/// # Safety
/// `out` must be valid for `out_len` entries and `attempts` null or valid
/// for `count` entries.
#[no_mangle]
pub unsafe extern "C" fn cg_sample_pne(
    game: *const CgGame,
    eps: f64,
    mix_constant: f64,
    seed: u64,
    count: usize,
    out: *mut usize,
    out_len: usize,
    attempts: *mut usize,
) -> CgStatus {
    guard(|| {
        let game = game_ref(game)?;
        let dest = output(out, out_len, count * game.players(), "out")?;
        let draws = PneSampler::new(game, eps, mix_constant)?.sample_many(count, seed)?;
        let profiles: Vec<StrategyProfile> = draws.iter().map(|(s, _)| s.clone()).collect();
        write_profiles(&profiles, dest);
        if !attempts.is_null() && count > 0 {
            let tries = slice::from_raw_parts_mut(attempts, count);
            for (t, (_, a)) in tries.iter_mut().zip(&draws) {
                *t = *a;
            }
        }
        Ok(())
    })
}

/// Final states of `count` independent chains of `steps` steps each.
///
/// # Safety
/// `out` must be valid for `out_len` entries.
#[no_mangle]
pub unsafe extern "C" fn cg_run_dynamics(
    game: *const CgGame,
    dynamics: CgDynamics,
    temperature: f64,
    steps: u64,
    seed: u64,
    count: usize,
    out: *mut usize,
    out_len: usize,
) -> CgStatus {
    guard(|| {
        let game = game_ref(game)?;
        let dest = output(out, out_len, count * game.players(), "out")?;
        let config = ChainConfig::new(temperature, seed, steps)?;
        let dynamics = match dynamics {
            CgDynamics::Logit => Dynamics::Logit,
            CgDynamics::RelaxedLogit => Dynamics::RelaxedLogit,
        };
        write_profiles(&run_independent_chains(game, &config, dynamics, count)?, dest);
        Ok(())
    })
}

/// Exact number of simple bipartite graphs with row degrees `k` and column
/// degrees `alpha`, written as a NUL-terminated decimal string. `needed`,
/// if not null, receives the buffer size required.
///
/// # Safety
/// `k` and `alpha` must hold the stated lengths and `buf` be valid for
/// `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cg_count_bipartite(
    k: *const usize,
    k_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> CgStatus {
    guard(|| {
        let seq = DegreeSequence::new(input(k, k_len, "k")?.to_vec(), input(alpha, alpha_len, "alpha")?.to_vec());
        let text = exact_bipartite_count(&seq)?.to_string();
        if let Some(n) = needed.as_mut() {
            *n = text.len() + 1;
        }
        let dest = output(buf, buf_len, text.len() + 1, "buf")?;
        for (d, b) in dest.iter_mut().zip(text.bytes().chain([0])) {
            *d = b as c_char;
        }
        Ok(())
    })
}

/// Natural log of the asymptotic bipartite count estimate.
///
/// # Safety
/// `k` and `alpha` must hold the stated lengths and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cg_mckay_log_estimate(
    k: *const usize,
    k_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut f64,
) -> CgStatus {
    guard(|| {
        let seq = DegreeSequence::new(input(k, k_len, "k")?.to_vec(), input(alpha, alpha_len, "alpha")?.to_vec());
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = mckay_estimate(&seq);
        Ok(())
    })
}
