use num_bigint::BigInt;
use pellforge::known::{letter_model, LETTER_KAPPA};
use pellforge::pell::{brute_force_admissible, family_orbit, integral_points, orbit_stream, quadratic_coeffs, x_over_b4};

fn kappa() -> BigInt {
    BigInt::from(LETTER_KAPPA)
}

#[test]
fn orbit_matches_brute_force_to_1e5() {
    let (c2, c1, c0) = quadratic_coeffs(&letter_model()).unwrap();
    let brute = brute_force_admissible(&c2, &c1, &c0, &kappa(), 100_000);
    let orbit = family_orbit(&letter_model(), &kappa()).unwrap();
    let stream = orbit_stream(&orbit, brute.len() + 1);
    assert_eq!(&stream[..brute.len()], &brute[..]);
    assert!(stream[brute.len()].magnitude() > &100_000u32.into());
    assert_eq!(&brute[..3], &[1.into(), (-15).into(), 529.into()]);
}

#[test]
fn ninth_and_eighteenth_points() {
    let pts = integral_points(&letter_model(), &kappa(), 18).unwrap();
    let t15 = &pts[1];
    assert_eq!(t15.t, BigInt::from(-15));
    assert_eq!(t15.x, BigInt::from(35334750));
    assert_eq!(t15.b.magnitude(), &17424u32.into());
    assert!((t15.rho.unwrap() - 5.34).abs() < 0.01);

    let ninth = &pts[8];
    assert_eq!(ninth.t, "812111750209".parse::<BigInt>().unwrap());
    assert_eq!(ninth.digits_x, 51);
    assert!(ninth.rho.unwrap() > 10.0);
    let limit = 2f64.powi(-25) / 81.0;
    assert!((x_over_b4(ninth) / limit - 1.0).abs() < 0.01);

    let eighteenth = &pts[17];
    assert_eq!(eighteenth.t, "-48926085100653611109021839".parse::<BigInt>().unwrap());
    assert_eq!(eighteenth.digits_x, 106);
    assert!(eighteenth.x.to_string().starts_with("371310"));
    assert!(eighteenth.rho.unwrap() > 11.0);
}
