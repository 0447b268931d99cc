fn main() -> std::process::ExitCode {
    walshframe::cli::main_entry()
}
