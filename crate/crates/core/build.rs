fn main() {
    // Dense complex solves go through LAPACK (zgetrf/zgetrs) from the system
    // OpenBLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
