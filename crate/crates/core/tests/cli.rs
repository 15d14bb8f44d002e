use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scalefree")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const SOLO_SIMPLEX: &str = "algorithm = solo\nset = simplex\ndim = 2\nregularizer = entropy\nscale = corollary2\n\
                            adversary = replay\nloss_file = one.csv\n";

#[test]
fn verify_inequalities_exits_zero() {
    let out = bin(&["verify", "--suite", "inequalities", "--trials", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite inequalities: ok"), "{text}");
}

#[test]
fn missing_config_is_a_config_error() {
    let out = bin(&["run", "--config", "missing.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.cfg"));
}

#[test]
fn usage_errors_exit_two() {
    let out = bin(&["verify", "--suite", "inequalities", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(bin(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_config_keys_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "algorithm = solo\nset = simplex\ndim = 2\nadversary = gaussian\nrounds = 3\ncolour = blue\n");
    let out = bin(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn run_single_round_config_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.csv", "t,dim,c1,c2\n1,2,1,0\n");
    let cfg = write(dir.path(), "solo.cfg", SOLO_SIMPLEX);
    let out_path = dir.path().join("trace.csv");
    let out = bin(&["run", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = rows(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(trace[0].join(","), "t,loss_norm,inst_loss,cum_loss,regret,scheme_scalar,bound,slack,w1,w2");
    let row: Vec<f64> = trace[1][1..].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[3], 0.5);
    // 13.3 sqrt(ln 2)
    assert!((row[5] - 13.3 * 2f64.ln().sqrt()).abs() < 1e-12);
    assert_eq!(&row[7..], &[0.5, 0.5]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS solo_corollary"));

    // scaled losses: same predictions, regret and bound scale together
    let big = bin(&["run", "--config", &cfg, "--scale", "1e6"]);
    assert_eq!(big.status.code(), Some(0));
    let trace_big = rows(&String::from_utf8(big.stdout).unwrap());
    let rb: Vec<f64> = trace_big[1][1..].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(rb[3], 0.5e6);
    assert_eq!(&rb[7..], &row[7..]);
}

#[test]
fn generated_losses_replay_to_identical_trace() {
    let dir = tempfile::tempdir().unwrap();
    let base = "algorithm = adaftrl\nset = box\nlower = -1,0,2\nupper = 1,3,2.5\nnorm = l2\nscale = corollary1\n";
    let gen_cfg = write(dir.path(), "gen.cfg", &format!("{base}adversary = gaussian\nsigma = 3\nrounds = 120\nseed = 5\n"));
    let losses = dir.path().join("losses.csv");
    // run keys its adversary with seed + 1
    let g = bin(&["generate", "--adversary", "gaussian:dim=3;rounds=120;sigma=3;seed=6", "--out", losses.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    let replay_cfg = write(dir.path(), "replay.cfg", &format!("{base}adversary = replay\nloss_file = losses.csv\n"));

    let a = bin(&["run", "--config", &gen_cfg]);
    let b = bin(&["run", "--config", &replay_cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert!(a.stdout.len() > 1000);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unbounded_run_with_comparators() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "full.cfg",
        "algorithm = solo\nset = full_space\ndim = 2\nadversary = spiky\nrounds = 50\nspike_magnitude = 1e4\n\
         comparators = 1,1;-5,2;0,0\nseed = 3\n",
    );
    let out = bin(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("solo_theorem[u2]"), "{err}");
    assert_eq!(rows(&String::from_utf8(out.stdout).unwrap()).len(), 51);
}

#[test]
fn generate_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.csv");
    let out = bin(&["generate", "--adversary", "gaussian:dim=2", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["generate", "--adversary", "lower_bound:set=simplex;dim=2;rounds=4;seed=1", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().count(), 5);
}
