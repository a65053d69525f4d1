//! Statistics checked against frozen scipy output (tests/data) and statrs.

use knowsearch::stats::dist::{chi_square_sf, f_sf, normal_cdf, studentized_range_sf};
use knowsearch::stats::{
    cohens_d, friedman_test, kruskal_wallis, linear_fit, nemenyi_posthoc, variance_homogeneity,
    PairedMatrix,
};
use serde_json::Value;
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

fn oracle() -> Value {
    let text = include_str!("data/stats_oracle.json");
    serde_json::from_str(text).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn vec_f(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(f).collect()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().unwrap().iter().map(vec_f).collect()
}

#[track_caller]
fn close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol * want.abs().max(1.0),
        "{what}: got {got}, want {want}"
    );
}

#[test]
fn fifty_random_fixtures_match_scipy() {
    let o = oracle();
    let fixtures = o["fixtures"].as_array().unwrap();
    assert_eq!(fixtures.len(), 50);
    for fx in fixtures {
        let seed = fx["seed"].as_u64().unwrap();
        let tag = |t: &str| format!("seed {seed} {t}");
        let m = PairedMatrix::new(matrix(&fx["matrix"])).unwrap();
        if !fx["friedman"].is_null() {
            let r = friedman_test(&m).unwrap();
            close(
                r.statistic,
                f(&fx["friedman"]["statistic"]),
                1e-9,
                &tag("friedman"),
            );
            close(r.p_value, f(&fx["friedman"]["p"]), 1e-6, &tag("friedman p"));
        }
        let pairs = nemenyi_posthoc(&m).unwrap();
        for (p, want) in pairs.iter().zip(fx["nemenyi"].as_array().unwrap()) {
            assert_eq!(p.a as u64, want["a"].as_u64().unwrap());
            assert_eq!(p.b as u64, want["b"].as_u64().unwrap());
            close(p.q, f(&want["q"]), 1e-9, &tag("nemenyi q"));
            close(p.p_value, f(&want["p"]), 1e-6, &tag("nemenyi p"));
        }
        let groups = matrix(&fx["groups"]);
        let kw = kruskal_wallis(&groups).unwrap();
        close(
            kw.statistic,
            f(&fx["kruskal"]["statistic"]),
            1e-9,
            &tag("kruskal"),
        );
        close(kw.p_value, f(&fx["kruskal"]["p"]), 1e-6, &tag("kruskal p"));
        let bf = variance_homogeneity(&groups).unwrap();
        close(
            bf.statistic,
            f(&fx["levene_median"]["statistic"]),
            1e-6,
            &tag("levene"),
        );
        close(
            bf.p_value,
            f(&fx["levene_median"]["p"]),
            1e-6,
            &tag("levene p"),
        );
        let d = cohens_d(&groups[0], &groups[1]).unwrap();
        close(d, f(&fx["cohens_d"]), 1e-9, &tag("cohens d"));
        let fit = linear_fit(&vec_f(&fx["x"]), &vec_f(&fx["y"])).unwrap();
        close(
            fit.slope,
            f(&fx["linregress"]["slope"]),
            1e-9,
            &tag("slope"),
        );
        close(
            fit.intercept,
            f(&fx["linregress"]["intercept"]),
            1e-9,
            &tag("intercept"),
        );
        close(
            fit.r_squared,
            f(&fx["linregress"]["r_squared"]),
            1e-9,
            &tag("r2"),
        );
    }
}

#[test]
fn ordered_matrix_extreme_pair() {
    let o = oracle();
    let m = PairedMatrix::new(vec![vec![1.0, 2.0, 3.0]; 3]).unwrap();
    let pair = nemenyi_posthoc(&m)
        .unwrap()
        .into_iter()
        .find(|p| (p.a, p.b) == (0, 2))
        .unwrap();
    let want = &o["ordered_3x3_extreme_pair"];
    close(pair.q, f(&want["q"]), 1e-4, "q");
    close(pair.p_value, f(&want["p"]), 1e-4, "p");
}

#[test]
fn five_rule_layout() {
    let o = oracle();
    let fx = &o["five_rule"];
    let rules: Vec<&str> = fx["rules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let m = PairedMatrix::new(matrix(&fx["matrix"])).unwrap();
    assert_eq!((m.subjects(), m.treatments()), (410, 5));
    let fr = friedman_test(&m).unwrap();
    close(
        fr.statistic,
        f(&fx["friedman"]["statistic"]),
        1e-9,
        "friedman",
    );
    assert!(fr.p_value < 1e-10);
    for p in nemenyi_posthoc(&m).unwrap() {
        let name = format!("{}-{}", rules[p.a], rules[p.b]);
        let want = &fx["pairs"][&name];
        close(p.q, f(&want["q"]), 1e-9, &name);
        close(p.p_value, f(&want["p"]), 1e-6, &name);
        match name.as_str() {
            "bfs-degree" => assert!(p.p_value < 0.05),
            "familiarity-degree" => assert!(p.p_value > 0.05),
            _ => {}
        }
    }
}

#[test]
fn brown_forsythe_fixtures() {
    let o = oracle();
    for name in ["equal_variance_normals", "doubled_spread"] {
        let fx = &o[name];
        let r = variance_homogeneity(&matrix(&fx["groups"])).unwrap();
        close(r.statistic, f(&fx["statistic"]), 1e-6, name);
        close(r.p_value, f(&fx["p"]), 1e-6, name);
    }
    let eq = variance_homogeneity(&matrix(&o["equal_variance_normals"]["groups"])).unwrap();
    assert!(eq.p_value > 0.05);
}

#[test]
fn distributions_match_statrs() {
    let normal = Normal::new(0.0, 1.0).unwrap();
    for i in 0..=80 {
        let x = -8.0 + 0.2 * f64::from(i);
        close(normal_cdf(x), normal.cdf(x), 1e-9, "normal");
    }
    for df in [1.0, 2.0, 3.0, 4.0, 7.0, 12.0, 30.0] {
        let chi = ChiSquared::new(df).unwrap();
        for x in [0.01, 0.5, 1.0, 3.0, 6.0, 11.0, 25.0, 60.0] {
            close(chi_square_sf(x, df), chi.sf(x), 1e-10, "chi2");
        }
    }
    for (d1, d2) in [
        (1.0, 1.0),
        (1.0, 17.0),
        (2.0, 15.0),
        (4.0, 40.0),
        (9.0, 3.0),
    ] {
        let fd = FisherSnedecor::new(d1, d2).unwrap();
        for x in [0.05, 0.5, 1.0, 2.5, 7.0, 30.0] {
            close(f_sf(x, d1, d2), fd.sf(x), 1e-9, "F");
        }
    }
}

#[test]
fn studentized_range_reference_points() {
    // upper 5% points of the range of k normals (infinite df)
    for (k, q05) in [(2, 2.772), (3, 3.314), (5, 3.858), (10, 4.474)] {
        close(studentized_range_sf(q05, k), 0.05, 2e-3, "q05");
    }
}
