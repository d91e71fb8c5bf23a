fn main() -> std::process::ExitCode {
    sqpo::cli::main()
}
