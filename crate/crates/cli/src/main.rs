fn main() {
    std::process::exit(bohrlab_cli::run(std::env::args_os()));
}
