fn main() -> std::process::ExitCode {
    beepnet::cli::main()
}
