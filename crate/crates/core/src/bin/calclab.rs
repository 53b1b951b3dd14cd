fn main() -> std::process::ExitCode {
    calclab::cli::main()
}
