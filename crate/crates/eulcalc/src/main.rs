fn main() {
    std::process::exit(eulcalc::cli::run(std::env::args_os()));
}
