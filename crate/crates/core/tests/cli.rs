use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eddy-casimir"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eddy-casimir-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SMALL_FIG3: &str = "[fig3]\nseparations = [2.0]\npoints = 5\n";

#[test]
fn fig_output_is_reproducible_from_its_header() {
    let cfg = scratch("fig3.toml");
    std::fs::write(&cfg, SMALL_FIG3).unwrap();
    let first = scratch("fig3_a.csv");
    let st = bin()
        .args(["fig", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&first)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&first).unwrap();

    // Rebuild from nothing but the header.
    let header: String = text
        .lines()
        .filter_map(|l| l.strip_prefix("#|"))
        .map(|l| format!("{}\n", l.strip_prefix(' ').unwrap_or(l)))
        .collect();
    let cfg2 = scratch("fig3_header.toml");
    std::fs::write(&cfg2, header).unwrap();
    let out = bin()
        .args(["fig", "3", "--config"])
        .arg(&cfg2)
        .env("EDDY_CASIMIR_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn fig1_eddy_pressure_is_repulsive() {
    let cfg = scratch("fig1.toml");
    std::fs::write(&cfg, "[fig1]\npoints = 7\n").unwrap();
    let out = bin()
        .args(["fig", "1", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let eddy = header
        .iter()
        .position(|&h| h == "eddy_pressure_norm")
        .unwrap();
    let drude = header
        .iter()
        .position(|&h| h == "drude_TE_pressure_norm")
        .unwrap();
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        assert!(f[eddy].parse::<f64>().unwrap() < 0.0);
        assert!(f[drude].parse::<f64>().unwrap() > 0.0);
        assert_eq!(*f.last().unwrap(), "1");
    }
}

#[test]
fn unknown_quantity_fails() {
    let out = bin()
        .args(["sweep", "--quantity", "torque", "--axis", "L:1:10:3"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown quantity"));
}

#[test]
fn bad_config_fails() {
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "[fig2]\ngama = 1e-3\n").unwrap();
    let out = bin()
        .args(["fig", "2", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn check_exit_status() {
    let ok = bin().args(["check", "--only", "12"]).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("[PASS] 12"));
    let bad = bin().args(["check", "--only", "99"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn rho_tilde_support_shrinks_with_separation() {
    // ρ̃(ξ; L) at fixed ξ grid; the nonzero part moves to small ξ as L grows.
    let mut support = Vec::new();
    for l in ["500", "1000", "2000"] {
        let out = bin()
            .args([
                "sweep",
                "--quantity",
                "rho_tilde",
                "--axis",
                "xi:1e-3:0.079:12",
                "--at",
            ])
            .arg(format!("L={l}"))
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let nonzero = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .filter(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap() != 0.0)
            .count();
        support.push(nonzero);
    }
    assert!(
        support[0] > support[1] && support[1] > support[2],
        "{support:?}"
    );
}
