fn main() {
    std::process::exit(quivermod::run(std::env::args_os()));
}
