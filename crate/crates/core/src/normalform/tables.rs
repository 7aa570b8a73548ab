//! The `F`, `F′`, `F″` and `G`, `G′`, `G″` tables feeding `r_i` and `s_i`.

use crate::params::ModelParams;

const SQ3: f64 = 1.732_050_807_568_877_2;

/// Index 0..4 holds entries 1..4 of each family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FGTable {
    pub f: [f64; 4],
    pub fp: [f64; 4],
    pub fpp: [f64; 4],
    pub g: [f64; 4],
    pub gp: [f64; 4],
    pub gpp: [f64; 4],
}

impl FGTable {
    /// The `s`-table source: `G` families in place of `F`.
    pub fn g_as_f(&self) -> FGTable {
        FGTable {
            f: self.g,
            fp: self.gp,
            fpp: self.gpp,
            ..*self
        }
    }

    /// `(name, value)` for all 24 entries.
    pub fn named(&self) -> Vec<(String, f64)> {
        let mut v = Vec::with_capacity(24);
        for (fam, vals) in [
            ("F", &self.f),
            ("F'", &self.fp),
            ("F''", &self.fpp),
            ("G", &self.g),
            ("G'", &self.gp),
            ("G''", &self.gpp),
        ] {
            for (i, x) in vals.iter().enumerate() {
                let (base, primes) = fam.split_at(1);
                v.push((format!("{base}{}{primes}", i + 1), *x));
            }
        }
        v
    }
}

/// Tables at the model's parameters (L4 drag sign).
pub fn fg_tables(p: &ModelParams) -> FGTable {
    fg_raw(p.gamma(), p.epsilon(), p.a2(), p.n_w1())
}

/// Tables for arbitrary `(γ, ε, A2, nW1)`, including the `μ → 0` limit `γ = 1`.
pub fn fg_raw(g: f64, e: f64, a: f64, w: f64) -> FGTable {
    let we = w * e;
    let f1 = -w * e / 6.0;
    let f2 = 3.0 / 32.0
        * (16.0 / 3.0 * e + 6.0 * a - 979.0 / 18.0 * a * e + (143.0 + 9.0 * g) / (6.0 * SQ3) * w
            + (555.0 + 376.0 * g) / (27.0 * SQ3) * we
            + g * (14.0 + 4.0 * e / 3.0 + 25.0 * a - 1507.0 / 18.0 * a * e
                - (215.0 + 29.0 * g) / (6.0 * SQ3) * w
                - 2.0 * (1174.0 + 169.0 * g) / (27.0 * SQ3) * we));
    let f3 = 3.0 * SQ3 / 16.0
        * (14.0 - 16.0 / 3.0 * e + 23.0 * a / 2.0 - 104.0 / 9.0 * a * e
            + 115.0 * (1.0 + g) / (18.0 * SQ3) * w
            - 2.0 * (439.0 - 68.0 * g) / (27.0 * SQ3) * we
            + g * (32.0 * e / 3.0 + 40.0 * a - 310.0 / 9.0 * a * e + (511.0 + 53.0 * g) / (6.0 * SQ3) * w
                - (2519.0 - 249.0 * g) / (27.0 * SQ3) * we));
    let f4 = -3.0 / 256.0
        * (364.0 + 420.0 * a - 17801.0 * a / 9.0 * a * e + (2821.0 + 189.0 * g) / (3.0 * SQ3) * w
            - (23077.0 + 9592.0 * g) / (27.0 * SQ3) * we
            + 28.0 * g
                * (23.0 + 100.0 * e / 21.0 + 849.0 * a / 14.0 + 59.0 / 7.0 * a * e
                    - (125.0 + 38.0 * g) / (6.0 * SQ3) * w
                    - (87613.0 - 213.0 * g) / (27.0 * SQ3) * we));

    let f1p = w * e / (3.0 * SQ3);
    let f2p = 3.0 * SQ3 / 16.0
        * (14.0 - 16.0 / 3.0 * e + a - 1367.0 / 18.0 * a * e + 115.0 * (1.0 + g) / (18.0 * SQ3) * w
            - (863.0 - 136.0 * g) / (27.0 * SQ3) * we
            + g * (32.0 * e / 3.0 + 40.0 * a - 382.0 / 9.0 * a * e + (511.0 + 53.0 * g) / (6.0 * SQ3) * w
                - (2519.0 - 24.0 * g) / (27.0 * SQ3) * we));
    let f3p = -9.0 / 8.0
        * (8.0 / 3.0 * e + 203.0 * a / 6.0 - 721.0 / 54.0 * a * e - (105.0 + 15.0 * g) / (18.0 * SQ3) * w
            - (319.0 - 114.0 * g) / (81.0 * SQ3) * we
            + g * (2.0 - 4.0 * e / 9.0 - 173.0 * a / 6.0 - 781.0 / 9.0 * a * e
                + (197.0 + 23.0 * g) / (18.0 * SQ3) * w
                - (265.0 - 32.0 * g) / (81.0 * SQ3) * we));
    let f4p = -3.0 * SQ3 / 16.0
        * (392.0 - 532.0 * e / 3.0 + 1918.0 * a / 3.0 - 28582.0 * a / 9.0 * a * e
            + (203.0 + 1211.0 * g) / (9.0 * SQ3) * w
            + (949.0 + 4378.0 * g) / (27.0 * SQ3) * we
            + 28.0 * g
                * (108.0 * e / 7.0 + 4037.0 * a / 84.0 - 611.0 / 21.0 * a * e
                    + (8397.0 + 919.0 * g) / (84.0 * SQ3) * w
                    - (92266.0 - 1869.0 * g) / (27.0 * SQ3) * we));

    let f1pp = w * e / 6.0;
    let f2pp = -9.0 / 32.0
        * (8.0 / 3.0 * e + 203.0 * a / 6.0 - 625.0 / 54.0 * a * e - (105.0 + 15.0 * g) / (18.0 * SQ3) * w
            - (307.0 - 114.0 * g) / (81.0 * SQ3) * we
            + g * (2.0 - 4.0 * e / 9.0 + 55.0 * a / 2.0 - 797.0 / 54.0 * a * e
                + (197.0 + 23.0 * g) / (18.0 * SQ3) * w
                - (211.0 - 32.0 * g) / (81.0 * SQ3) * we));
    let f3pp = -9.0 * SQ3 / 16.0
        * (2.0 - 8.0 / 3.0 * e + 55.0 * a / 6.0 - 134.0 / 3.0 * a * e - (37.0 + g) / (18.0 * SQ3) * w
            - (93.0 + 226.0 * g) / (81.0 * SQ3) * we
            + g * (4.0 * e + 169.0 / 27.0 * a * e + (241.0 + 45.0 * g) / (18.0 * SQ3) * w
                - (1558.0 - 126.0 * g) / (81.0 * SQ3) * we));
    let f4pp = 9.0 / 256.0
        * (212.0 / 3.0 * e + 2950.0 * a / 3.0 - 1370.0 * a / 27.0 * a * e
            - (771.0 + 237.0 * g) / (9.0 * SQ3) * w
            - 2.0 * (1907.0 - 984.0 * g) / (81.0 * SQ3) * we
            + 28.0 * g
                * (11.0 / 7.0 + 4.0 * e / 9.0 - 152.0 * a / 7.0 - 36965.0 / 504.0 * a * e
                    + (2569.0 + 277.0 * g) / (252.0 * SQ3) * w
                    + (22603.0 + 4396.0 * g) / (1134.0 * SQ3) * we));

    let g1 = -w * e / 6.0;
    let g2 = 3.0 / 32.0
        * (14.0 - 16.0 / 3.0 * e + a - 1367.0 / 18.0 * a * e + 115.0 * (1.0 + g) / (18.0 * SQ3) * w
            - (863.0 - 136.0 * g) / (27.0 * SQ3) * we
            + g * (32.0 * e / 3.0 + 40.0 * a - 382.0 / 9.0 * a * e + (511.0 + 53.0 * g) / (6.0 * SQ3) * w
                - (2519.0 - 24.0 * g) / (27.0 * SQ3) * we));
    let g3 = 3.0 * SQ3 / 16.0
        * (16.0 / 3.0 * e + 6.0 * a - 907.0 * a / 18.0 * a * e + (143.0 + 9.0 * g) / (6.0 * SQ3) * w
            + (477.0 + 403.0 * g) / (27.0 * SQ3) * we
            + g * (14.0 + 4.0 * e / 3.0 + 71.0 * a / 2.0 - 1489.0 / 18.0 * a * e
                - (215.0 + 29.0 * g) / (6.0 * SQ3) * w
                - 2.0 * (1174.0 + 169.0 * g) / (27.0 * SQ3) * we));
    let g4 = 3.0 * SQ3 / 256.0
        * (84.0 + 52.0 * e + 212.0 * a - 267.0 * a * e + 2.0 * (299.0 + 61.0 * g) / (3.0 * SQ3) * w
            - (14854.0 + 225.0 * g) / (27.0 * SQ3) * we
            + g * (32.0 * e + 156.0 * a + 649.0 * a * e - (562.0 + 8.0 * g) / (3.0 * SQ3) * w
                + (13285.0 + 5169.0 * g) / (27.0 * SQ3) * we));

    let g1p = -w * e / SQ3;
    let g2p = 9.0 / 16.0
        * (8.0 / 3.0 * e + 203.0 * a / 6.0 - 625.0 / 54.0 * a * e - (105.0 + 15.0 * g) / (18.0 * SQ3) * w
            - (307.0 - 114.0 * g) / (81.0 * SQ3) * we
            - g * (2.0 - 4.0 * e / 9.0 - 55.0 * a / 2.0 - 797.0 / 54.0 * a * e
                + (197.0 + 23.0 * g) / (18.0 * SQ3) * w
                - (211.0 - 32.0 * g) / (81.0 * SQ3) * we));
    let g3p = 3.0 * SQ3 / 8.0
        * (14.0 - 16.0 / 3.0 * e + 65.0 * a / 6.0 - 1439.0 / 18.0 * a * e
            + 115.0 * (1.0 + g) / (18.0 * SQ3) * w
            - (941.0 - 118.0 * g) / (27.0 * SQ3) * we
            + g * (32.0 * e / 3.0 - 40.0 * a - 310.0 / 9.0 * a * e + (511.0 + 53.0 * g) / (6.0 * SQ3) * w
                - (251.0 - 24.0 * g) / (27.0 * SQ3) * we));
    let g4p = -9.0 / 128.0
        * (12.0 * e - 287.0 * a + 847.0 * a / 9.0 * a * e - 2.0 * (28.0 + g) / SQ3 * w
            - 4.0 * (2210.0 - 69.0 * g) / (27.0 * SQ3) * we
            - g * (96.0 + 152.0 * e / 3.0 + 135.0 * a - 2320.0 / 9.0 * a * e
                + (497.0 - 123.0 * g) / (3.0 * SQ3) * w
                - 4.0 * (17697.0 + 32.0 * g) / (27.0 * SQ3) * we));

    let g1pp = -w * e / 6.0;
    let g2pp = 9.0 * SQ3 / 32.0
        * (2.0 - 8.0 / 3.0 * e + 23.0 * a / 3.0 - 44.0 * a * e - (37.0 + g) / (18.0 * SQ3) * w
            - (123.0 + 349.0 * g) / (3.0 * SQ3) * we
            + g * (4.0 * e + 88.0 * a / 27.0 + (421.0 + 45.0 * g) / (18.0 * SQ3) * w
                - (1558.0 - 126.0 * g) / (81.0 * SQ3) * we));
    let g3pp = -9.0 / 16.0
        * (8.0 / 9.0 * e + 203.0 * a / 6.0 - 589.0 / 54.0 * a * e - 5.0 * (51.0 + 2.0 * g) / (18.0 * SQ3) * w
            - (349.0 - 282.0 * g) / (81.0 * SQ3) * we
            + g * (2.0 - 4.0 * e / 9.0 - 26.0 * a - 412.0 / 27.0 * a * e
                + (197.0 + 23.0 * g) / (18.0 * SQ3) * w
                - (211.0 - 32.0 * g) / (81.0 * SQ3) * we));
    let g4pp = -9.0 * SQ3 / 256.0
        * (12.0 + 20.0 / 3.0 * e + 76.0 * a - 350.0 * a / 3.0 * a * e + 32.0 * g / (3.0 * SQ3) * w
            - 2.0 * (1529.0 + 450.0 * g) / (27.0 * SQ3) * we
            + g * (8.0 * e - 749.0 * a / 3.0 + 808.0 / 9.0 * a * e - (109.0 - 40.0 * g) / (3.0 * SQ3) * w
                + (35.0 - 1269.0 * g) / (27.0 * SQ3) * we));

    FGTable {
        f: [f1, f2, f3, f4],
        fp: [f1p, f2p, f3p, f4p],
        fpp: [f1pp, f2pp, f3pp, f4pp],
        g: [g1, g2, g3, g4],
        gp: [g1p, g2p, g3p, g4p],
        gpp: [g1pp, g2pp, g3pp, g4pp],
    }
}
