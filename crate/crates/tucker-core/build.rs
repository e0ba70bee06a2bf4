fn main() {
    // Symmetric eigensolves go through LAPACK's dsyevr; the system OpenBLAS
    // bundles both BLAS and LAPACK symbols.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
