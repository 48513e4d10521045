fn main() {
    std::process::exit(moc_bandit::cli::cli_main(std::env::args_os()));
}
