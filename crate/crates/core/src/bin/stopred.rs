fn main() -> std::process::ExitCode {
    stopred::cli::main()
}
