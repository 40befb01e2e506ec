#pragma once

#include <vector>

namespace evosi {

// Ai and Ai' on [-1e4, 100]; outside that range out_of_range_error is thrown.
double airy_ai(double x);
double airy_ai_prime(double x);
void airy_pair(double x, double& ai, double& aip);

// first `count` zeros z_1 > z_2 > ... of Ai (count <= 2000)
std::vector<double> airy_zeros(int count);

// Taylor coefficients c_0..c_order of Ai(x0 + h) in h
std::vector<double> airy_taylor(double x0, int order);

} // namespace evosi
