//! The command-line pipeline driven in-process: construct, bound, verify,
//! then replay the manifest.

fn run(args: &[&str]) -> anyhow::Result<()> {
    let mut argv = vec!["unital-iso".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    unital_iso::cli::run(argv)
}

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let p = |name: &str| dir.path().join(name).display().to_string();
    run(&["construct", "hermitian", "--q", "3", "-o", &p("h3.json")])?;
    run(&["bounds", &p("h3.json"), "--exact-arc", "--out", &p("h3"), "--manifest", &p("h3.manifest.json")])?;
    run(&["verify", &p("h3/certificate.json"), &p("h3.json")])?;
    run(&["replay", &p("h3.manifest.json")])?;
    print!("{}", std::fs::read_to_string(p("h3.manifest.json"))?);
    Ok(())
}
