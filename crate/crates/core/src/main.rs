fn main() -> std::process::ExitCode {
    unital_iso::cli::main()
}
