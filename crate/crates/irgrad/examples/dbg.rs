fn main() {
    for z in [-0.5f64, 0.2, 1.0] {
        let lo = irgrad::special::von_mises_cdf_dkappa_ad(z, 49.999).unwrap();
        let hi = irgrad::special::von_mises_cdf_dkappa_ad(z, 50.001).unwrap();
        println!("z={z}: lo={lo:e} hi={hi:e} diff={:e}", (lo - hi).abs());
    }
}
