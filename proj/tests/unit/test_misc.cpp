#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "ddecc/csv.hpp"
#include "ddecc/rng.hpp"

using namespace ddecc;

TEST(Rng, Deterministic) {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        (void)c;
    }
    EXPECT_NE(Rng(42)(), Rng(43)());
}

TEST(Rng, DerivedStreamsDiffer) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(derive_seed(7, s));
    EXPECT_EQ(seeds.size(), 1000u);
}

TEST(Rng, UniformAndBelow) {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const double v = rng.uniform_open_closed();
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_LT(rng.below(7), 7u);
    }
}

TEST(Rng, NormalMoments) {
    Rng rng(3);
    const int n = 200000;
    double s = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        sq += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Csv, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, ConfigHeaderRoundTrip) {
    const std::map<std::string, std::string> cfg{{"seed", "7"}, {"ebn0", "4,5,6"}, {"code", "hamming74"}};
    std::ostringstream out;
    write_config_header(out, cfg);
    out << "decoder,ber\nml,0.1\n# not header\n";
    EXPECT_EQ(read_config_header(out.str()), cfg);
}
