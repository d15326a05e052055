#include "wmr/app/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace wmr {

const char* to_string(GeneratorKind kind) noexcept {
    switch (kind) {
        case GeneratorKind::Twonorm: return "twonorm";
        case GeneratorKind::Ringnorm: return "ringnorm";
        case GeneratorKind::Waveform: return "waveform";
    }
    return "?";
}

GeneratorKind generator_kind_from_string(const std::string& text) {
    for (auto k : {GeneratorKind::Twonorm, GeneratorKind::Ringnorm, GeneratorKind::Waveform}) {
        if (text == to_string(k)) return k;
    }
    throw ContractError("unknown generator '" + text + "'");
}

std::size_t generator_dimension(GeneratorKind kind) noexcept {
    return kind == GeneratorKind::Waveform ? 21 : 20;
}

Dataset generate_dataset(GeneratorKind kind, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ContractError("generated datasets need at least two samples");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(kind), 0x9e37u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<ClassLabel> labels(n, ClassLabel::Omega2);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n / 2), ClassLabel::Omega1);
    std::shuffle(labels.begin(), labels.end(), rng);

    const std::size_t d = generator_dimension(kind);
    const double a = 2.0 / std::sqrt(20.0);
    auto wave = [](int i, int center) { return std::max(6.0 - std::abs(i - center), 0.0); };

    std::vector<Sample> samples;
    samples.reserve(n);
    for (ClassLabel label : labels) {
        Sample x(d);
        const bool second = label == ClassLabel::Omega2;
        switch (kind) {
            case GeneratorKind::Twonorm:
                for (double& v : x) v = gauss(rng) + (second ? a : -a);
                break;
            case GeneratorKind::Ringnorm:
                for (double& v : x) v = second ? gauss(rng) + a : 2.0 * gauss(rng);
                break;
            case GeneratorKind::Waveform: {
                const double u = unit(rng);
                // features are 1-based positions i = 1..21; h1 peaks at 11
                const int other = second ? 7 : 15;
                for (std::size_t j = 0; j < d; ++j) {
                    const int i = static_cast<int>(j) + 1;
                    x[j] = u * wave(i, 11) + (1.0 - u) * wave(i, other) + gauss(rng);
                }
                break;
            }
        }
        samples.push_back(std::move(x));
    }
    return Dataset(to_string(kind), std::move(samples), std::move(labels));
}

}  // namespace wmr
