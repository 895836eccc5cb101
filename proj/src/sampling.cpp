#include "ellqdet/sampling.hpp"

#include <cmath>

namespace ellqdet {

double Sampler::uniform(double lo, double hi)
{
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

LogComplex Sampler::annulus(double rmin, double rmax)
{
    const double r = uniform(rmin, rmax);
    const double phase = uniform(-LogComplex::kPi, LogComplex::kPi);
    return LogComplex(cplx{std::log(r), phase});
}

ModelParams Sampler::params(int n)
{
    for (int i = 0; i < kMaxResamples; ++i) {
        ModelParams p;
        p.n = n;
        p.log_q = nome_q();
        p.log_p = nome_p();
        if (p.validate().empty()) return p;
    }
    throw DomainError("Sampler: no generic (q, p) found");
}

}  // namespace ellqdet
