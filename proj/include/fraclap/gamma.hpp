#pragma once

namespace fraclap {

// Lanczos approximation, reflection below 1/2. Throws at poles.
double gamma_fn(double x);

}  // namespace fraclap
