use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use congestion_gibbs_ffi::*;

const EXAMPLE_ONE: &str = "players = 2
resource a costs = [0, 6]
resource b costs = [0, 6]
structure = ep { par(arc(a), arc(b)) }
";

const KUNIFORM: &str = "players = 2
resource r1 costs = [1, 2] capacity = 1
resource r2 costs = [1, 3]
resource r3 costs = [2, 2]
structure = kuniform k = [2, 1]
";

fn parse(text: &str) -> *mut CgGame {
    let text = CString::new(text).unwrap();
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { cg_game_parse(text.as_ptr(), &mut game) }, CgStatus::Ok);
    assert!(!game.is_null());
    game
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        cg_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn game_queries() {
    let game = parse(EXAMPLE_ONE);
    unsafe {
        assert_eq!(cg_game_players(game), 2);
        assert_eq!(cg_game_strategies(game, 1), 2);
        assert_eq!(cg_game_strategies(game, 2), 0);
        let mut phi = 0.0;
        assert_eq!(cg_game_potential(game, [0usize, 0].as_ptr(), 2, &mut phi), CgStatus::Ok);
        assert_eq!(phi, 6.0);
        let mut nash = true;
        assert_eq!(cg_game_is_nash(game, [0usize, 0].as_ptr(), 2, &mut nash), CgStatus::Ok);
        assert!(!nash);
        assert_eq!(cg_game_is_nash(game, [0usize, 1].as_ptr(), 2, &mut nash), CgStatus::Ok);
        assert!(nash);
        assert_eq!(cg_game_potential(game, [0usize, 5].as_ptr(), 2, &mut phi), CgStatus::InvalidArgument);
        cg_game_free(game);
    }
}

#[test]
fn capacity_violation_is_infinite() {
    let game = parse(KUNIFORM);
    unsafe {
        // player 1 holds {r1, r2}, player 2 holds {r1}
        let mut phi = 0.0;
        assert_eq!(cg_game_potential(game, [0usize, 0].as_ptr(), 2, &mut phi), CgStatus::Ok);
        assert_eq!(phi, f64::INFINITY);
        cg_game_free(game);
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = CString::new("players = 2\nresource a costs = [0, x]\n").unwrap();
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { cg_game_parse(text.as_ptr(), &mut game) }, CgStatus::ParseError);
    assert!(game.is_null());
    assert!(last_error().starts_with("line 2"), "{}", last_error());
}

#[test]
fn null_pointers_are_reported() {
    let mut game = ptr::null_mut();
    assert_eq!(unsafe { cg_game_parse(ptr::null(), &mut game) }, CgStatus::NullPointer);
    let mut out = [0usize; 4];
    let status = unsafe { cg_sample_gibbs(ptr::null(), 1.0, 0.01, 4.0, CgWeightMode::Exact, 1, 2, out.as_mut_ptr(), 4) };
    assert_eq!(status, CgStatus::NullPointer);
    assert_eq!(unsafe { cg_game_players(ptr::null()) }, 0);
    unsafe { cg_game_free(ptr::null_mut()) };
}

#[test]
fn sampling_is_seeded() {
    let game = parse(EXAMPLE_ONE);
    let draw = |seed| {
        let mut out = vec![usize::MAX; 2 * 50];
        let status = unsafe { cg_sample_gibbs(game, 1.0, 0.01, 4.0, CgWeightMode::Exact, seed, 50, out.as_mut_ptr(), out.len()) };
        assert_eq!(status, CgStatus::Ok);
        out
    };
    let a = draw(3);
    assert_eq!(a, draw(3));
    assert!(a.iter().all(|&c| c < 2));
    let mut short = [0usize; 3];
    let status = unsafe { cg_sample_gibbs(game, 1.0, 0.01, 4.0, CgWeightMode::Exact, 3, 2, short.as_mut_ptr(), 3) };
    assert_eq!(status, CgStatus::BufferTooSmall);
    unsafe { cg_game_free(game) };
}

#[test]
fn pne_and_dynamics() {
    let game = parse(EXAMPLE_ONE);
    let mut out = vec![0usize; 2 * 20];
    let mut attempts = vec![0usize; 20];
    unsafe {
        let status = cg_sample_pne(game, 0.05, 4.0, 9, 20, out.as_mut_ptr(), out.len(), attempts.as_mut_ptr());
        assert_eq!(status, CgStatus::Ok);
        for pair in out.chunks(2) {
            let mut nash = false;
            cg_game_is_nash(game, pair.as_ptr(), 2, &mut nash);
            assert!(nash, "{pair:?}");
        }
        assert!(attempts.iter().all(|&a| a >= 1));
        let status = cg_run_dynamics(game, CgDynamics::RelaxedLogit, 1.0, 100, 9, 20, out.as_mut_ptr(), out.len());
        assert_eq!(status, CgStatus::Ok);
        cg_game_free(game);
    }
}

#[test]
fn kuniform_sampling_respects_capacity() {
    let game = parse(KUNIFORM);
    let mut out = vec![0usize; 2 * 40];
    for mode in [CgWeightMode::Exact, CgWeightMode::Mckay] {
        unsafe {
            let status = cg_sample_gibbs(game, 0.5, 0.05, 4.0, mode, 4, 40, out.as_mut_ptr(), out.len());
            assert_eq!(status, CgStatus::Ok, "{}", last_error());
            for pair in out.chunks(2) {
                let mut phi = 0.0;
                cg_game_potential(game, pair.as_ptr(), 2, &mut phi);
                assert!(phi.is_finite());
            }
        }
    }
    unsafe { cg_game_free(game) };
}

#[test]
fn bipartite_counts() {
    let k = [2usize, 1];
    let alpha = [1usize, 1, 1];
    let mut buf = [0 as c_char; 8];
    let mut needed = 0;
    let status = unsafe { cg_count_bipartite(k.as_ptr(), 2, alpha.as_ptr(), 3, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(status, CgStatus::Ok);
    // choose which of the three columns the second row takes
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "3");
    assert_eq!(needed, 2);

    let mut tiny = [0 as c_char; 1];
    let status = unsafe { cg_count_bipartite(k.as_ptr(), 2, alpha.as_ptr(), 3, tiny.as_mut_ptr(), 1, &mut needed) };
    assert_eq!(status, CgStatus::BufferTooSmall);
    assert_eq!(needed, 2);

    let mut est = 0.0;
    let ones = [1usize, 1];
    assert_eq!(unsafe { cg_mckay_log_estimate(ones.as_ptr(), 2, ones.as_ptr(), 2, &mut est) }, CgStatus::Ok);
    assert!((est - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/congestion_gibbs.h")).unwrap();
    for name in [
        "cg_last_error_message",
        "cg_game_parse",
        "cg_game_free",
        "cg_game_players",
        "cg_game_strategies",
        "cg_game_potential",
        "cg_game_is_nash",
        "cg_sample_gibbs",
        "cg_sample_pne",
        "cg_run_dynamics",
        "cg_count_bipartite",
        "cg_mckay_log_estimate",
        "typedef struct CgGame CgGame",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

fn static_library() -> Option<PathBuf> {
    // target/tmp is a sibling of the profile directories
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent()?;
    ["debug", "release"]
        .iter()
        .map(|p| target.join(p).join("libcongestion_gibbs_ffi.a"))
        .find(|p| p.exists())
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_library() else {
        eprintln!("static library not built; skipping the C link check");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping the C link check");
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cg_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 17);
    assert!(stdout.contains("error: line 1"), "{stdout}");
}
