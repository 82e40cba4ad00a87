fn main() {
    // A line-printing tool must die quietly when its reader goes away
    // (`biweyl bound ... | head -1`), not panic on the failed write; Rust
    // ignores SIGPIPE by default, so restore the usual disposition.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(biweyl_cli::run());
}
