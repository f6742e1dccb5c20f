fn main() {
    std::process::exit(jordan_wlcp::run(std::env::args_os()));
}
