fn main() {
    std::process::exit(primefam::cli::run() as i32);
}
