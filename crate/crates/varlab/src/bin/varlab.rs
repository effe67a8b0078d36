fn main() {
    // Rust ignores SIGPIPE, so printing into a closed pipe (`varlab … | head`)
    // would panic mid-report; restore the default disposition so the process
    // dies quietly like other command-line tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(varlab::cli::run());
}
