//! Scalar special functions.

pub mod asymptotic;
pub mod barnes;
pub mod gamma;
pub mod lambda;
pub mod limits;
pub mod qdilog;
pub mod zeta;

pub use asymptotic::{
    asymptotic_log_f, asymptotic_log_lambda, gamma_n_second_stirling, second_stirling_coefficients, SecondStirling,
};
pub use barnes::{f_fn, log_f, log_f_with, log_gamma1, log_gamma2, log_gamma2_with, DoubleGammaArgs, Gamma2Config};
pub use gamma::{
    constants, gamma, log_barnes_g, log_barnes_g_with, log_gamma, zeta_prime_em, zeta_prime_minus_one, BarnesGConfig,
    Constants, POLE_EPS,
};
pub use lambda::{lambda_fn, log_lambda, ModifiedGammaArgs};
pub use limits::{delta_fn, log_delta, log_upsilon, upsilon_fn};
pub use qdilog::{quantum_dilog, quantum_dilog_inverse_series, QDilogArgs, QDILOG_GUARD};
pub use zeta::barnes_zeta;
