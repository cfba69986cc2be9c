#pragma once

// generated by tests/oracles/golden.py
namespace golden {
inline constexpr double kSupT2Phi = 0.16571661477885140;
inline constexpr double kArgSupT2Phi = 1.1906012483427703;
inline constexpr double kA_zeta = 0.14033477059305639;
inline constexpr double kA_eta1 = 23.651605614457430;
inline constexpr double kA_c1 = 72.954816843372289;
inline constexpr double kA_c2 = 84.377245558126294;
inline constexpr double kA_eta_R2 = 888.85232845387045;
inline constexpr double kA_zeta_L0 = 0.11597914925045982;
inline constexpr double kA_t13_log_rho = -9.2403283409459851e-278;
inline constexpr double kA_t13_C_tilde = 1085.7684512283486;
inline constexpr double kA_t13_epsilon = 1.8599933431175022e-276;
inline constexpr double kA_t13_delta = 41.697100586618211;
inline constexpr double kA_t13_M = 40.697100586618211;
inline constexpr double kA_t13_lam = 0.60653065971263342;
inline constexpr double kA_t13_beta = 4.2000000000000000;
inline constexpr double kB_R_tilde = 16.000000000000000;
inline constexpr double kB_lambda_a = 0.60653065971263342;
inline constexpr double kB_C_a = 1.1377439718027065;
inline constexpr double kB_R_a = 16.000000000000000;
inline constexpr double kB_gamma_bar_1 = 0.10000000000000000;
inline constexpr double kB_B_a = 3.8574255306969743;
inline constexpr double kB_D_a = 1350.2905167178419;
inline constexpr double kB_A_a = 2.3460484348869351;
inline constexpr double kB_alpha_a = 7662.6502439517900;
inline constexpr double kB_eta_Ra = 1.0751175806337089e+19;
inline constexpr double kB_c3 = 1.7166488974628302e+23;
inline constexpr double kB_t13_log_rho = -2.9964586512804220e-36;
inline constexpr double kB_t13_C_tilde = 4299666575.5319616;
inline constexpr double kB_t13_epsilon = 1.7581836835597973e-34;
inline constexpr double kB_t13_delta = 90080.478663055428;
inline constexpr double kB_t13_M = 22.816917514228910;
inline constexpr double kB_t13_beta = 8861.0749954157270;
inline constexpr double kB_c1 = 4.6113252298613274;
inline constexpr double kA_t4_linear = 30285.517737157280;
inline constexpr double kA_t4_indicator = 30286.659980028756;
inline constexpr double kB_t4_exponential = 2.0063686797698704e+32;
inline constexpr double kApp_c = 0.015625000000000000;
inline constexpr double kApp_M = 8.0000000000000000;
inline constexpr double kApp_lam = 0.018315638888734180;
inline constexpr double kApp_C1 = 2.1000000000000000;
inline constexpr double kApp_C2 = 2.1000000000000000;
inline constexpr double kApp_B1 = 9.5137500000000000;
inline constexpr double kApp_B2 = 1.1766455078125000;
inline constexpr double kApp_A = 173.50969281812787;
inline constexpr double kTvR = 0.99841555222346491;
inline constexpr double kAlpha7 = 0.013792768812137050;
inline constexpr double kBeta7 = 0.33887333639473675;
inline constexpr double kAlpha1000 = 0.39925738847558065;
inline constexpr double kBeta1000 = 1.3048395625636596;
inline constexpr double kExpMoment = 0.75779689318698686;
inline constexpr double kMassZero = 0.96012238832325508;
}  // namespace golden
