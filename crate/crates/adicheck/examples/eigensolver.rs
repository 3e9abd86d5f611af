//! Diagonalize complex Hermitian matrices and inspect the result.
//!
//! Run with:
//! ```bash
//! cargo run --example eigensolver
//! ```

use adicheck::matrix::{apply, hermitian_eig, inner, random_hermitian, ComplexMatrix};

fn main() -> adicheck::Result<()> {
    // A small Hermitian matrix given by real and imaginary parts.
    let h = ComplexMatrix::from_re_im(
        &[
            vec![1.0, 0.3, 0.0],
            vec![0.3, -0.5, 0.2],
            vec![0.0, 0.2, 0.8],
        ],
        Some(&[
            vec![0.0, 0.4, 0.0],
            vec![-0.4, 0.0, -0.1],
            vec![0.0, 0.1, 0.0],
        ]),
    )?;

    let frame = hermitian_eig(&h, 0.0)?;
    println!("eigenvalues (ascending):");
    for (n, e) in frame.eigenvalues.iter().enumerate() {
        println!("  E_{n} = {e:+.12}");
    }
    println!("spectral range = {:.12}", frame.spectral_range());
    println!("smallest gap   = {:.12}", frame.min_gap());

    // Verify the eigenpairs: ||H v - E v|| should be near machine epsilon.
    println!("\nresiduals ||H v_n - E_n v_n||:");
    for n in 0..frame.dim() {
        let hv = apply(&h, &frame.eigenvectors[n])?;
        let res: f64 = (0..frame.dim())
            .map(|i| (hv.get(i) - frame.eigenvalues[n] * frame.eigenvectors[n].get(i)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!("  level {n}: {res:.3e}");
    }

    // Orthonormality across the basis.
    let mut worst = 0.0f64;
    for m in 0..frame.dim() {
        for n in 0..frame.dim() {
            let o = inner(&frame.eigenvectors[m], &frame.eigenvectors[n])?;
            let expect = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((o.norm() - expect).abs());
        }
    }
    println!("worst orthonormality defect: {worst:.3e}");

    // Reproducible random Hermitian matrices for stress tests.
    let big = random_hermitian(8, 42)?;
    let frame = hermitian_eig(&big, 0.0)?;
    println!(
        "\nrandom 8x8 (seed 42): spectrum [{:+.6}, {:+.6}], min gap {:.6}",
        frame.eigenvalues[0],
        frame.eigenvalues[7],
        frame.min_gap()
    );
    Ok(())
}
