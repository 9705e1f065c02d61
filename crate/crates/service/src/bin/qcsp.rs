fn main() {
    std::process::exit(qcsp_service::cli::main());
}
