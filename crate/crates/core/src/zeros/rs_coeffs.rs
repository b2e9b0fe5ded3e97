//! Chebyshev coefficients of the Riemann–Siegel correction functions
//! `C_0 … C_4` on `p ∈ [0, 1]`, in the variable `z = 2p − 1`.
//!
//! Generated by `scripts/gen_rs_coeffs.py` (60-digit mpmath derivatives of
//! `Ψ(p) = cos 2π(p² − p − 1/16) / cos 2πp`). Coefficients below 1e-40 are
//! structural zeros from the parity of each `C_j` and are written as 0.

pub(crate) const C0: [f64; 29] = [
    0.6426672862397684,
    0.0,
    0.27197299999785507,
    0.0,
    0.010738605819340285,
    0.0,
    -0.0013743815296336614,
    0.0,
    -0.00012468221880320676,
    0.0,
    -5.764599706783048e-07,
    0.0,
    2.728067429580452e-07,
    0.0,
    8.07795305950047e-09,
    0.0,
    -2.0884608068869654e-10,
    0.0,
    -1.3115561854739528e-11,
    0.0,
    -1.4207987228087186e-14,
    0.0,
    1.0271701357931162e-14,
    0.0,
    1.3974598819518373e-16,
    0.0,
    -4.4841187339522885e-18,
    0.0,
    -1.1830599573845289e-19,
];

pub(crate) const C1: [f64; 30] = [
    0.0,
    0.010697913921003001,
    0.0,
    0.017170651243377882,
    0.0,
    0.002793211149788471,
    0.0,
    -3.6375653719275045e-05,
    0.0,
    -2.7108955231150888e-05,
    0.0,
    -1.0483749866752774e-06,
    0.0,
    5.886467166527572e-08,
    0.0,
    4.322967268502779e-09,
    0.0,
    -1.1369591588273712e-11,
    0.0,
    -6.6998339103553274e-12,
    0.0,
    -1.0079997652808475e-13,
    0.0,
    5.152488009222117e-15,
    0.0,
    1.521695447183697e-16,
    0.0,
    -1.8619464833687103e-18,
    0.0,
    -1.1301846184246265e-19,
];

pub(crate) const C2: [f64; 27] = [
    0.0031461158539889122,
    0.0,
    -0.0023087838845307503,
    0.0,
    5.769820766689844e-05,
    0.0,
    0.000352388620236659,
    0.0,
    2.5246667458684434e-05,
    0.0,
    -3.442821197193136e-06,
    0.0,
    -3.535074556622459e-07,
    0.0,
    3.730830183792625e-09,
    0.0,
    1.2776951864116635e-09,
    0.0,
    2.1874616204147057e-11,
    0.0,
    -1.914141096461037e-12,
    0.0,
    -6.562883102168523e-14,
    0.0,
    1.2586009182411715e-15,
    0.0,
    8.140076623881463e-17,
];

pub(crate) const C3: [f64; 30] = [
    0.0,
    7.123256221203874e-05,
    0.0,
    0.00023234305298164808,
    0.0,
    -0.00012929912045472474,
    0.0,
    1.807449641367144e-05,
    0.0,
    6.5261851872204395e-06,
    0.0,
    -1.1696365378521986e-07,
    0.0,
    -7.349476126518126e-08,
    0.0,
    -1.7750910077907072e-09,
    0.0,
    2.555552961326525e-10,
    0.0,
    1.13766366005373e-11,
    0.0,
    -3.349863898530277e-13,
    0.0,
    -2.5537379354163893e-14,
    0.0,
    6.766500771321871e-17,
    0.0,
    2.976888471991973e-17,
    0.0,
    2.9952208087566915e-19,
];

pub(crate) const C4: [f64; 31] = [
    0.0001676574524669686,
    0.0,
    -0.00022728768943416726,
    0.0,
    6.477387188445696e-05,
    0.0,
    -8.49220050012541e-06,
    0.0,
    -2.6161407245219076e-06,
    0.0,
    8.336764968733215e-07,
    0.0,
    6.324704037544833e-08,
    0.0,
    -1.0059949403001072e-08,
    0.0,
    -7.822677204130333e-10,
    0.0,
    3.16765828534986e-11,
    0.0,
    3.5006944702052894e-12,
    0.0,
    -1.4314814511443748e-14,
    0.0,
    -7.269402707921764e-15,
    0.0,
    -8.780556594835957e-17,
    0.0,
    8.15025447495458e-18,
    0.0,
    1.920839705822086e-19,
];
