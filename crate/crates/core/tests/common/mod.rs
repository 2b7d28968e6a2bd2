//! Shared test oracles.
//!
//! `oracle` holds values frozen from a 40-digit mpmath run
//! (`tests/oracle/gen_oracle.py`). The alternating-series evaluator below is
//! an independent double-precision route to zeta on the critical line; it
//! shares no code with the crate's Euler–Maclaurin or Riemann–Siegel paths.
#![allow(dead_code)]

use num_complex::Complex64;

pub mod oracle {
    /// First twenty ordinates of critical zeros.
    pub const ZERO_ORDINATES: [f64; 20] = [
        14.134_725_141_734_693_79,
        21.022_039_638_771_554_99,
        25.010_857_580_145_688_76,
        30.424_876_125_859_513_21,
        32.935_061_587_739_189_69,
        37.586_178_158_825_671_26,
        40.918_719_012_147_495_19,
        43.327_073_280_914_999_52,
        48.005_150_881_167_159_73,
        49.773_832_477_672_302_18,
        52.970_321_477_714_460_64,
        56.446_247_697_063_394_80,
        59.347_044_002_602_353_08,
        60.831_778_524_609_809_84,
        65.112_544_048_081_606_66,
        67.079_810_529_494_173_71,
        69.546_401_711_173_979_25,
        72.067_157_674_481_907_58,
        75.704_690_699_083_933_17,
        77.144_840_068_874_805_37,
    ];

    pub const T1: f64 = ZERO_ORDINATES[0];

    pub fn zeros_up_to(t_max: f64) -> Vec<f64> {
        ZERO_ORDINATES.iter().copied().filter(|&t| t <= t_max).collect()
    }

    pub const ZETA_HALF: f64 = -1.460_354_508_809_586_812_9;

    /// (t, Re zeta(1/2 + it), Im zeta(1/2 + it))
    pub const ZETA_CRITICAL: [(f64, f64, f64); 14] = [
        (0.0, -1.460_354_508_809_586_812_9, 0.0),
        (3.0, 0.532_736_670_974_232_883_92, -0.078_896_513_425_833_382_656),
        (10.0, 1.544_895_220_296_752_766_9, -0.115_336_465_271_273_375_44),
        (14.134725, 1.767_429_841_384_903_915e-8, -1.110_202_893_092_311_674_7e-7),
        (18.5, 2.101_607_284_156_529_402_2, -0.761_063_892_826_757_334_25),
        (25.0, 0.004_984_593_364_035_675_383_4, -0.014_012_301_962_583_382_963),
        (37.5, -0.036_188_834_501_300_920_653, -0.164_231_130_926_688_931_58),
        (39.9, 0.959_762_639_106_841_453_81, -1.044_014_627_545_058_071_1),
        (40.1, 0.630_022_804_723_152_171_46, -1.008_755_730_589_312_072_3),
        (45.0, 2.713_525_535_630_815_261_3, 1.800_055_151_400_834_833_3),
        (60.0, 0.541_200_835_146_348_111_15, 0.227_183_922_368_268_728_65),
        (77.7, 0.285_324_070_815_445_029_36, 0.793_931_529_365_901_205_51),
        (90.0, 1.863_476_335_687_842_190_7, 2.926_103_607_255_752_465_1),
        (110.0, 0.156_439_965_801_068_685_25, -3.059_414_308_036_996_698_9),
    ];

    /// (t, Z(t))
    pub const HARDY_Z: [(f64, f64); 7] = [
        (5.0, -0.738_863_428_275_264_764_36),
        (17.0, 2.142_712_183_043_314_320_3),
        (35.0, 2.826_478_611_327_422_481),
        (42.0, 1.102_467_956_455_565_794_7),
        (70.0, 0.981_943_529_478_513_823_84),
        (100.0, 2.692_697_056_664_463_475),
        (118.0, 2.621_850_623_314_646_527_5),
    ];

    /// zeta^{(k)}(1/2) for k = 0..=4
    pub const ZETA_DERIVATIVES_AT_HALF: [f64; 5] = [
        -1.460_354_508_809_586_812_9,
        -3.922_646_139_209_151_727_5,
        -16.008_357_013_928_661_423,
        -96.003_309_245_319_070_097,
        -767.997_319_720_447_429_81,
    ];

    /// zeta^{(k)}(1/2 + 14.134725 i) for k = 0..=4
    pub const ZETA_DERIVATIVES_NEAR_T1: [(f64, f64); 5] = [
        (1.767_429_841_384_903_915e-8, -1.110_202_893_092_311_674_7e-7),
        (0.783_296_479_298_711_802_25, 0.124_699_916_831_352_248_09),
        (-0.614_409_749_133_571_554_13, -0.229_783_709_800_465_033_08),
        (0.470_513_074_491_529_086_17, 0.320_624_821_120_449_681_91),
        (-0.334_367_559_053_435_705_51, -0.398_622_166_964_222_963_76),
    ];

    /// zeta^{(k)}(1/2 + 30 i) for k = 0..=4
    pub const ZETA_DERIVATIVES_AT_30: [(f64, f64); 5] = [
        (-0.120_642_287_590_043_699_91, -0.583_691_214_763_706_288_76),
        (1.537_740_818_102_470_418, 0.157_891_656_316_924_976_32),
        (-2.279_578_265_435_140_779_5, 0.305_632_658_405_519_582_31),
        (3.526_255_002_360_576_474_6, -0.846_377_308_975_928_306_19),
        (-5.577_278_177_106_186_610_5, 1.479_530_917_927_365_598_8),
    ];

    pub const GAMMA_QUARTER_MINUS_7I: (f64, f64) =
        (2.582_003_509_403_341_808e-5, 1.370_386_949_767_616_847_5e-6);
    pub const GAMMA_3_PLUS_40I: (f64, f64) =
        (-1.586_960_998_451_476_363_3e-24, -1.300_714_980_038_894_281e-23);
    pub const GAMMA_MINUS_2_5_PLUS_I: (f64, f64) =
        (-0.041_736_625_807_893_613_745, -0.086_369_107_369_763_484_694);

    /// E(f)(u) for f(x) = e^{-πx²}(2πx² - 1): (u, value)
    pub const E_OF_GAUSSIAN_EXAMPLE: [(f64, f64); 3] = [
        (1.0, 0.228_391_297_196_672_996_36),
        (0.3, 0.273_861_278_752_494_816_95),
        (2.5, 1.796_698_531_925_188_120_9e-7),
    ];

    /// psi(z) for the same f, by direct quadrature: (z, re, im)
    pub const PSI_GAUSSIAN_EXAMPLE: [(f64, f64, f64); 2] = [
        (0.0, -0.680_822_054_082_667_756_53, 0.0),
        (3.0, 0.075_598_263_592_764_582_254, 0.234_246_769_211_512_244_38),
    ];

    /// psi_{f_k}(z) for f_k = H(1+H)(x^{2k} e^{-πx²}), by direct quadrature of
    /// the differentiated function: (k, z, re, im)
    pub const PSI_FAMILY: [(usize, f64, f64, f64); 4] = [
        (0, 0.0, -0.340_411_027_041_333_878_27, 0.0),
        (0, 5.0, 0.354_236_321_385_007_519_29, 0.116_615_291_430_041_632_39),
        (1, 2.5, -0.052_200_302_767_486_735_474, -0.327_364_685_490_072_785_08),
        (2, 14.134_725_141_734_694, -0.003_227_586_877_581_235_319_6, 0.008_363_802_208_995_603_695_2),
    ];

    /// E(f_0)(u): (u, value)
    pub const E_OF_F0: [(f64, f64); 2] = [
        (0.5, 0.002_743_371_663_874_772_173_2),
        (1.0, 0.893_393_800_934_246_888_17),
    ];
}

/// Borwein's accelerated alternating series for the Dirichlet eta function,
/// turned into zeta via `zeta(s) = eta(s) / (1 - 2^{1-s})`.
///
/// Accurate to about `1e-13` for `|t| <= 60`.
pub fn zeta_by_eta(s: Complex64) -> Complex64 {
    let n = 90usize;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0f64;
    let mut acc = 0.0f64;
    for i in 0..=n {
        if i > 0 {
            let i1 = (i - 1) as f64;
            let nf = n as f64;
            term *= 4.0 * (nf + i1) * (nf - i1) / ((2.0 * i1 + 1.0) * (2.0 * i1 + 2.0));
        }
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let power = (-s * ((k + 1) as f64).ln()).exp();
        sum += power * (sign * (d[k] - dn));
    }
    let eta = -sum / dn;
    let one = Complex64::new(1.0, 0.0);
    eta / (one - (Complex64::new(2f64.ln(), 0.0) * (one - s)).exp())
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:e}, want {want:e}, |diff| = {:e} > {tol:e}",
        (got - want).abs()
    );
}

pub fn assert_close_c(got: Complex64, want: Complex64, tol: f64, what: &str) {
    assert!(
        (got - want).norm() <= tol,
        "{what}: got {got}, want {want}, |diff| = {:e} > {tol:e}",
        (got - want).norm()
    );
}
