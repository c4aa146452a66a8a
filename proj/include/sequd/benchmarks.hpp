#pragma once

// Synthetic objective suite: the two 2-D demonstration functions (cliff,
// octopus; maximized) and 32 standard global-minimization test functions.
//
// Formulas and constants follow the usual published definitions of these
// functions (Hartmann A/P tables, Shekel C/beta, Langermann A/c, De Jong N.5
// lattice, ...). Each known optimum records a minimizer polished to full
// double precision together with the objective at that point; the published
// minima agree with those values to the precision they are usually quoted at.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sequd/direction.hpp"

namespace sequd {

struct KnownOptimum {
    double value = 0.0;
    std::vector<std::vector<double>> locations;
};

struct BenchmarkFunction {
    std::string name;
    std::size_t dimension = 0;
    std::vector<std::pair<double, double>> domain;
    std::function<double(std::span<const double>)> fn;
    std::optional<KnownOptimum> known_optimum;
    Direction direction = Direction::minimize;

    [[nodiscard]] double evaluate(std::span<const double> x) const {
        if (x.size() != dimension) {
            throw std::invalid_argument(name + ": expected " + std::to_string(dimension) + " coordinates, got " +
                                        std::to_string(x.size()));
        }
        return fn(x);
    }
};

namespace bench {

using std::numbers::pi;
using Vec = std::span<const double>;

inline double sq(double v) { return v * v; }

inline double cliff(double x1, double x2) {
    return std::exp(-0.5 * x1 * x1 / 100.0 - 0.5 * sq(x2 + 0.03 * x1 * x1 - 3.0));
}

inline double octopus(double x1, double x2) {
    return 2.0 * std::cos(10.0 * x1) * std::sin(10.0 * x2) + std::sin(10.0 * x1 * x2);
}

inline double bukin6(Vec x) {
    return 100.0 * std::sqrt(std::abs(x[1] - 0.01 * x[0] * x[0])) + 0.01 * std::abs(x[0] + 10.0);
}

inline double crossit(Vec x) {
    const double t = std::abs(100.0 - std::hypot(x[0], x[1]) / pi);
    return -0.0001 * std::pow(std::abs(std::sin(x[0]) * std::sin(x[1]) * std::exp(t)) + 1.0, 0.1);
}

inline double egg(Vec x) {
    return -(x[1] + 47.0) * std::sin(std::sqrt(std::abs(x[1] + x[0] / 2.0 + 47.0))) -
           x[0] * std::sin(std::sqrt(std::abs(x[0] - (x[1] + 47.0))));
}

inline double holder(Vec x) {
    return -std::abs(std::sin(x[0]) * std::cos(x[1]) * std::exp(std::abs(1.0 - std::hypot(x[0], x[1]) / pi)));
}

inline double langer(Vec x) {
    constexpr double a[5][2] = {{3, 5}, {5, 2}, {2, 1}, {1, 4}, {7, 9}};
    constexpr double c[5] = {1, 2, 5, 2, 3};
    double total = 0.0;
    for (int i = 0; i < 5; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d += sq(x[j] - a[i][j]);
        total += c[i] * std::exp(-d / pi) * std::cos(pi * d);
    }
    return total;
}

inline double levy(Vec x) {
    auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
    const std::size_t d = x.size();
    double v = sq(std::sin(pi * w(0)));
    for (std::size_t i = 0; i + 1 < d; ++i) v += sq(w(i) - 1.0) * (1.0 + 10.0 * sq(std::sin(pi * w(i) + 1.0)));
    v += sq(w(d - 1) - 1.0) * (1.0 + sq(std::sin(2.0 * pi * w(d - 1))));
    return v;
}

inline double levy13(Vec x) {
    return sq(std::sin(3.0 * pi * x[0])) + sq(x[0] - 1.0) * (1.0 + sq(std::sin(3.0 * pi * x[1]))) +
           sq(x[1] - 1.0) * (1.0 + sq(std::sin(2.0 * pi * x[1])));
}

inline double schwef(Vec x) {
    double v = 418.9829 * static_cast<double>(x.size());
    for (double xi : x) v -= xi * std::sin(std::sqrt(std::abs(xi)));
    return v;
}

inline double shubert(Vec x) {
    double a = 0.0;
    double b = 0.0;
    for (int i = 1; i <= 5; ++i) {
        a += i * std::cos((i + 1) * x[0] + i);
        b += i * std::cos((i + 1) * x[1] + i);
    }
    return a * b;
}

inline double booth(Vec x) { return sq(x[0] + 2.0 * x[1] - 7.0) + sq(2.0 * x[0] + x[1] - 5.0); }

inline double mccorm(Vec x) {
    return std::sin(x[0] + x[1]) + sq(x[0] - x[1]) - 1.5 * x[0] + 2.5 * x[1] + 1.0;
}

inline double powersum(Vec x) {
    constexpr double b[4] = {8, 18, 44, 114};
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double inner = 0.0;
        for (double xj : x) inner += std::pow(xj, static_cast<double>(i + 1));
        v += sq(inner - b[i]);
    }
    return v;
}

inline double zakharov(Vec x) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

inline double camel6(Vec x) {
    const double a = x[0];
    const double b = x[1];
    return (4.0 - 2.1 * a * a + a * a * a * a / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b;
}

inline double dixonpr(Vec x) {
    double v = sq(x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) v += static_cast<double>(i + 1) * sq(2.0 * x[i] * x[i] - x[i - 1]);
    return v;
}

inline double rosen(Vec x) {
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) v += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
    return v;
}

inline double perm0db(Vec x) {
    constexpr double beta = 10.0;
    const std::size_t d = x.size();
    double v = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
        double inner = 0.0;
        for (std::size_t j = 1; j <= d; ++j) {
            const double jd = static_cast<double>(j);
            const double id = static_cast<double>(i);
            inner += (jd + beta) * (std::pow(x[j - 1], id) - 1.0 / std::pow(jd, id));
        }
        v += inner * inner;
    }
    return v;
}

inline double trid(Vec x) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += sq(x[i] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) v -= x[i] * x[i - 1];
    return v;
}

inline double dejong5(Vec x) {
    constexpr double grid[5] = {-32, -16, 0, 16, 32};
    double total = 0.002;
    for (int i = 0; i < 25; ++i) {
        const double a1 = grid[i % 5];
        const double a2 = grid[i / 5];
        total += 1.0 / (i + 1 + std::pow(x[0] - a1, 6) + std::pow(x[1] - a2, 6));
    }
    return 1.0 / total;
}

inline double easom(Vec x) {
    return -std::cos(x[0]) * std::cos(x[1]) * std::exp(-sq(x[0] - pi) - sq(x[1] - pi));
}

inline double michal(Vec x) {
    constexpr int m = 10;
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v -= std::sin(x[i]) * std::pow(std::sin(static_cast<double>(i + 1) * x[i] * x[i] / pi), 2 * m);
    }
    return v;
}

inline double beale(Vec x) {
    const double a = x[0];
    const double b = x[1];
    return sq(1.5 - a + a * b) + sq(2.25 - a + a * b * b) + sq(2.625 - a + a * b * b * b);
}

inline double branin(Vec x) {
    const double b = 5.1 / (4.0 * pi * pi);
    const double c = 5.0 / pi;
    const double t = 1.0 / (8.0 * pi);
    return sq(x[1] - b * x[0] * x[0] + c * x[0] - 6.0) + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

inline double colville(Vec x) {
    return 100.0 * sq(x[0] * x[0] - x[1]) + sq(x[0] - 1.0) + sq(x[2] - 1.0) + 90.0 * sq(x[2] * x[2] - x[3]) +
           10.1 * (sq(x[1] - 1.0) + sq(x[3] - 1.0)) + 19.8 * (x[1] - 1.0) * (x[3] - 1.0);
}

inline double goldpr(Vec x) {
    const double a = x[0];
    const double b = x[1];
    const double f1 = 1.0 + sq(a + b + 1.0) * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    const double f2 =
        30.0 + sq(2.0 * a - 3.0 * b) * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    return f1 * f2;
}

constexpr double kHartAlpha[4] = {1.0, 1.2, 3.0, 3.2};
constexpr double kHart3A[4][3] = {{3.0, 10, 30}, {0.1, 10, 35}, {3.0, 10, 30}, {0.1, 10, 35}};
constexpr double kHart3P[4][3] = {
    {0.3689, 0.1170, 0.2673}, {0.4699, 0.4387, 0.7470}, {0.1091, 0.8732, 0.5547}, {0.0381, 0.5743, 0.8828}};
constexpr double kHart6A[4][6] = {
    {10, 3, 17, 3.5, 1.7, 8}, {0.05, 10, 17, 0.1, 8, 14}, {3, 3.5, 1.7, 10, 17, 8}, {17, 8, 0.05, 10, 0.1, 14}};
constexpr double kHart6P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                  {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                  {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                  {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

template <std::size_t Cols>
double hartmann_sum(Vec x, const double (&a)[4][Cols], const double (&p)[4][Cols]) {
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) inner += a[i][j] * sq(x[j] - p[i][j]);
        total += kHartAlpha[i] * std::exp(-inner);
    }
    return total;
}

inline double hart3(Vec x) { return -hartmann_sum(x, kHart3A, kHart3P); }
// 4-D variant uses the first four columns of the 6-D constants, rescaled.
inline double hart4(Vec x) { return (1.1 - hartmann_sum(x, kHart6A, kHart6P)) / 0.839; }
inline double hart6(Vec x) { return -hartmann_sum(x, kHart6A, kHart6P); }

inline double permdb(Vec x) {
    constexpr double beta = 0.5;
    const std::size_t d = x.size();
    double v = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
        double inner = 0.0;
        for (std::size_t j = 1; j <= d; ++j) {
            const double jd = static_cast<double>(j);
            const double id = static_cast<double>(i);
            inner += (std::pow(jd, id) + beta) * (std::pow(x[j - 1] / jd, id) - 1.0);
        }
        v += inner * inner;
    }
    return v;
}

inline double powell(Vec x) {
    double v = 0.0;
    for (std::size_t k = 0; k + 3 < x.size(); k += 4) {
        const double a = x[k], b = x[k + 1], c = x[k + 2], d = x[k + 3];
        v += sq(a + 10.0 * b) + 5.0 * sq(c - d) + std::pow(b - 2.0 * c, 4) + 10.0 * std::pow(a - d, 4);
    }
    return v;
}

inline double shekel(Vec x) {
    constexpr double beta[10] = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
    constexpr double c[4][10] = {{4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
                                 {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6},
                                 {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
                                 {4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6}};
    double v = 0.0;
    for (int i = 0; i < 10; ++i) {
        double inner = beta[i];
        for (int j = 0; j < 4; ++j) inner += sq(x[static_cast<std::size_t>(j)] - c[j][i]);
        v -= 1.0 / inner;
    }
    return v;
}

inline double stybtang(Vec x) {
    double v = 0.0;
    for (double xi : x) v += xi * xi * xi * xi - 16.0 * xi * xi + 5.0 * xi;
    return 0.5 * v;
}

}  // namespace bench

/// Every registered function, in a fixed order: cliff, octopus, then the 32-function suite.
inline const std::vector<BenchmarkFunction>& benchmark_registry() {
    static const std::vector<BenchmarkFunction> registry = [] {
        using Dom = std::vector<std::pair<double, double>>;
        using Loc = std::vector<std::vector<double>>;
        auto rep = [](std::size_t d, double lo, double hi) { return Dom(d, {lo, hi}); };
        auto fixed = [](std::vector<double> v, std::size_t) { return v; };
        (void)fixed;
        std::vector<BenchmarkFunction> r;
        auto add = [&](std::string name, Dom dom, double (*fn)(bench::Vec), std::optional<KnownOptimum> opt,
                       Direction dir = Direction::minimize) {
            const std::size_t d = dom.size();
            r.push_back({std::move(name), d, std::move(dom), fn, std::move(opt), dir});
        };

        r.push_back({"cliff", 2, Dom{{-20.0, 20.0}, {-10.0, 5.0}},
                     [](bench::Vec x) { return bench::cliff(x[0], x[1]); },
                     KnownOptimum{1.0, Loc{{0.0, 3.0}}}, Direction::maximize});
        r.push_back({"octopus", 2, Dom{{0.0, 1.0}, {0.0, 1.0}},
                     [](bench::Vec x) { return bench::octopus(x[0], x[1]); },
                     KnownOptimum{2.9964854440233726, Loc{{0.31599598217182784, 0.4724674086471432}}},
                     Direction::maximize});

        // Many local minima
        add("bukin6", Dom{{-15.0, -5.0}, {-3.0, 3.0}}, bench::bukin6, KnownOptimum{0.0, Loc{{-10.0, 1.0}}});
        add("crossit", rep(2, -10, 10), bench::crossit,
            KnownOptimum{-2.0626118708227397, Loc{{1.3494066151254658, 1.3494066118056898}}});
        add("egg", rep(2, -512, 512), bench::egg, KnownOptimum{-959.6406627208509, Loc{{512.0, 404.23180482889796}}});
        add("holder", rep(2, -10, 10), bench::holder,
            KnownOptimum{-19.208502567886747, Loc{{8.055023481243204, 9.66459000812999}}});
        add("langer", rep(2, 0, 10), bench::langer,
            KnownOptimum{-4.155809291847786, Loc{{2.7934022066764164, 1.597232504205214}}});
        add("levy", rep(2, -10, 10), bench::levy, KnownOptimum{0.0, Loc{{1.0, 1.0}}});
        add("levy13", rep(2, -10, 10), bench::levy13, KnownOptimum{0.0, Loc{{1.0, 1.0}}});
        add("schwef", rep(6, -500, 500), bench::schwef,
            KnownOptimum{7.636702503077686e-05, Loc{std::vector<double>(6, 420.9687)}});
        add("shubert", rep(2, -10, 10), bench::shubert,
            KnownOptimum{-186.73090883102392, Loc{{-7.083506409397382, 4.858056877022195}}});
        // Plate-shaped
        add("booth", rep(2, -10, 10), bench::booth, KnownOptimum{0.0, Loc{{1.0, 3.0}}});
        add("mccorm", Dom{{-1.5, 4.0}, {-3.0, 4.0}}, bench::mccorm,
            KnownOptimum{-1.9132229549810367, Loc{{-0.5471975514842097, -1.5471975393122004}}});
        add("powersum", rep(4, 0, 4), bench::powersum, KnownOptimum{0.0, Loc{{1.0, 2.0, 2.0, 3.0}}});
        add("zakharov", rep(4, -5, 10), bench::zakharov, KnownOptimum{0.0, Loc{{0.0, 0.0, 0.0, 0.0}}});
        // Valley-shaped
        add("camel6", Dom{{-3.0, 3.0}, {-2.0, 2.0}}, bench::camel6,
            KnownOptimum{-1.0316284534898774,
                         Loc{{0.08984201394474121, -0.7126564058067679}, {-0.08984201394474121, 0.7126564058067679}}});
        add("dixonpr", rep(4, -10, 10), bench::dixonpr,
            KnownOptimum{0.0, Loc{{1.0, 0.7071067811865476, 0.5946035575013605, 0.5452538663326288}}});
        add("rosen", rep(8, -5, 10), bench::rosen, KnownOptimum{0.0, Loc{std::vector<double>(8, 1.0)}});
        // Bowl-shaped
        add("perm0db", rep(2, -2, 2), bench::perm0db, KnownOptimum{0.0, Loc{{1.0, 0.5}}});
        add("trid", rep(2, -4, 4), bench::trid, KnownOptimum{-2.0, Loc{{2.0, 2.0}}});
        // Steep ridges or drops
        add("dejong5", rep(2, -65.536, 65.536), bench::dejong5,
            KnownOptimum{0.9980038377944498, Loc{{-31.97833337956783, -31.978334007870856}}});
        add("easom", rep(2, -100, 100), bench::easom, KnownOptimum{-1.0, Loc{{bench::pi, bench::pi}}});
        add("michal", rep(5, 0, bench::pi), bench::michal,
            KnownOptimum{-4.687658179088149, Loc{{2.202905521908651, 1.5707963287237718, 1.2849915733857917,
                                                  1.9230584705540652, 1.7204697723081988}}});
        // Other
        add("beale", rep(2, -4.5, 4.5), bench::beale, KnownOptimum{0.0, Loc{{3.0, 0.5}}});
        add("branin", Dom{{-5.0, 10.0}, {0.0, 15.0}}, bench::branin,
            KnownOptimum{0.39788735772973816, Loc{{-bench::pi, 12.275}, {bench::pi, 2.275}, {3.0 * bench::pi, 2.475}}});
        add("colville", rep(4, -10, 10), bench::colville, KnownOptimum{0.0, Loc{{1.0, 1.0, 1.0, 1.0}}});
        add("goldpr", rep(2, -2, 2), bench::goldpr, KnownOptimum{3.0, Loc{{0.0, -1.0}}});
        add("hart3", rep(3, 0, 1), bench::hart3,
            KnownOptimum{-3.862779787332663, Loc{{0.11458887930324516, 0.5556488952654733, 0.8525469855113912}}});
        add("hart4", rep(4, 0, 1), bench::hart4,
            KnownOptimum{-3.1344941412224, Loc{{0.18739527170312797, 0.19415152881919345, 0.5579177776383374,
                                                0.2647796246269558}}});
        add("hart6", rep(6, 0, 1), bench::hart6,
            KnownOptimum{-3.322368011415515, Loc{{0.20168951037717156, 0.150010691466166, 0.4768739733716025,
                                                  0.27533242885448195, 0.3116516165628256, 0.6573005308460204}}});
        add("permdb", rep(2, -2, 2), bench::permdb, KnownOptimum{0.0, Loc{{1.0, 2.0}}});
        add("powell", rep(4, -4, 5), bench::powell, KnownOptimum{0.0, Loc{{0.0, 0.0, 0.0, 0.0}}});
        add("shekel", rep(4, 0, 10), bench::shekel,
            KnownOptimum{-10.53644315348353,
                         Loc{{4.000746867869747, 3.9995094850576276, 4.000746868809279, 3.999509480017675}}});
        add("stybtang", rep(6, -5, 5), bench::stybtang,
            KnownOptimum{-234.9969942226285,
                         Loc{{-2.9035340253536726, -2.903534024832987, -2.9035340447170324, -2.9035340520549613,
                              -2.9035340413472412, -2.903534021989109}}});
        return r;
    }();
    return registry;
}

inline const BenchmarkFunction& lookup_benchmark(const std::string& name) {
    for (const auto& f : benchmark_registry()) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("unknown benchmark function \"" + name + "\"");
}

}  // namespace sequd
