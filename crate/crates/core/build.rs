fn main() {
    // Link the system reference LAPACK/BLAS (no *-src backend).
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
