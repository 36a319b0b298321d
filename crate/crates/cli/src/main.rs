fn main() {
    std::process::exit(resnet::run(std::env::args_os()));
}
