#pragma once

namespace sticky {

//! Standard normal CDF via erfc; accurate in both tails.
double normal_cdf(double x);
double normal_pdf(double x);

//! sup_{t>=0} t^2 Phi(-t) and its argmax, computed once per process.
double sup_t2_normal_tail();
double argsup_t2_normal_tail();

} // namespace sticky

namespace sticky {

//! log Phi(x), finite far into the lower tail.
double log_normal_cdf(double x);

} // namespace sticky
