#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "multivenc/config.hpp"

using namespace mvenc;

namespace {

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& contents) : path(name) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("parse_real accepts pi-carrying forms") {
    CHECK(parse_real("0.25") == doctest::Approx(0.25));
    CHECK(parse_real("-3") == doctest::Approx(-3.0));
    CHECK(parse_real("pi") == doctest::Approx(M_PI));
    CHECK(parse_real("-pi") == doctest::Approx(-M_PI));
    CHECK(parse_real("2pi") == doctest::Approx(2.0 * M_PI));
    CHECK(parse_real("0.5pi") == doctest::Approx(0.5 * M_PI));
    CHECK(parse_real("pi/100") == doctest::Approx(M_PI / 100.0));
    CHECK(parse_real(" 2pi / 4 ") == doctest::Approx(M_PI / 2.0));
    CHECK_THROWS_AS(parse_real("abc"), ParseError);
    CHECK_THROWS_AS(parse_real("pi/0"), ParseError);
    CHECK_THROWS_AS(parse_real("2pix"), ParseError);
    CHECK_THROWS_AS(parse_real(""), ParseError);
}

TEST_CASE("builtin scheme config") {
    const ProblemConfig cfg = parse_config_text(
        "[scheme]\n"
        "builtin = balanced4\n",
        "cfg");
    REQUIRE(cfg.has_scheme());
    CHECK(cfg.scheme->L == 4);
    CHECK(cfg.scheme->gamma_m == doctest::Approx(M_PI / 100.0));
    CHECK(cfg.scheme->noise_std == doctest::Approx(0.2));
    CHECK_FALSE(cfg.preprocessor.has_value());
    CHECK(cfg.system().size() == 6);
}

TEST_CASE("overrides on a builtin scheme") {
    const ProblemConfig cfg = parse_config_text(
        "[scheme]\n"
        "builtin = balanced4   # comment survives\n"
        "gamma_m = pi/50\n"
        "noise_std = 0.1\n"
        "magnitudes = 1 0.8 1 1\n",
        "cfg");
    CHECK(cfg.scheme->gamma_m == doctest::Approx(M_PI / 50.0));
    CHECK(cfg.scheme->noise_std == doctest::Approx(0.1));
    CHECK(cfg.scheme->magnitudes[1] == doctest::Approx(0.8));
}

TEST_CASE("explicit moments") {
    const ProblemConfig cfg = parse_config_text(
        "[scheme]\n"
        "L = 4\n"
        "moments = -1 -1 -1 ; 1 1 -1 ; 1 -1 1 ; -1 1 1\n",
        "cfg");
    CHECK(cfg.scheme->L == 4);
    CHECK(cfg.scheme->moments.at(0, 0) == Rational(-1));
    CHECK(cfg.scheme->magnitudes.size() == 4);

    SUBCASE("L mismatch is rejected") {
        CHECK_THROWS_AS(parse_config_text("[scheme]\nL = 5\nmoments = 1 0 0 ; 0 1 0 ; 0 0 1\n",
                                          "cfg"),
                        ParseError);
    }
    SUBCASE("rows need exactly 3 entries") {
        CHECK_THROWS_AS(parse_config_text("[scheme]\nmoments = 1 0 ; 0 1\n", "cfg"),
                        ParseError);
    }
    SUBCASE("ragged rows are rejected") {
        CHECK_THROWS_AS(parse_config_text("[scheme]\nmoments = 1 0 0 ; 0 1\n", "cfg"),
                        ParseError);
    }
}

TEST_CASE("direct difference section") {
    const ProblemConfig cfg = parse_config_text(
        "[difference]\n"
        "rows = 1 0 0 ; 0 1/2 0 ; 0 0 1/3\n"
        "scale = 2pi\n",
        "cfg");
    CHECK_FALSE(cfg.has_scheme());
    const DifferenceSystem d = cfg.system();
    CHECK(d.size() == 3);
    CHECK(d.rational.at(1, 1) == Rational(1, 2));
    CHECK(d.gamma_m == doctest::Approx(2.0 * M_PI));
    CHECK(d.velocity_scale() == doctest::Approx(1.0));
}

TEST_CASE("error messages carry the label and line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("junk\n", "cfg"),
                         "cfg:1: expected key = value", ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scheme\n", "cfg"),
                         "cfg:1: unterminated section", ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("# only comments\n", "cfg"),
                         "cfg: need a [scheme] or [difference] section", ParseError);
    CHECK_THROWS_WITH_AS(parse_config_text("[scheme]\ngamma_m = pi/100\n", "cfg"),
                         "cfg: [scheme] needs 'builtin' or 'moments'", ParseError);
}

TEST_CASE("builtin preprocessors resolve with their range kinds") {
    const ProblemConfig cfg = parse_config_text(
        "[scheme]\n"
        "builtin = balanced4\n"
        "preprocessor = p91\n",
        "cfg");
    REQUIRE(cfg.preprocessor.has_value());
    CHECK(cfg.preprocessor->name == "p91");
    CHECK(cfg.preprocessor->range_kind == RangeKind::Lattice);

    const ProblemConfig slab = parse_config_text(
        "[scheme]\nbuiltin = balanced4\npreprocessor = p10\n", "cfg");
    CHECK(slab.preprocessor->range_kind == RangeKind::Slab);
}

TEST_CASE("matrix files") {
    SUBCASE("preprocessor from a file") {
        const TempFile f("test_config_pre.txt",
                         "# selector for the first three rows\n"
                         "1 0 0 0 0 0\n"
                         "0 1 0 0 0 0\n"
                         "0 0 1 0 0 0\n");
        const ProblemConfig cfg = parse_config_text(
            "[scheme]\nbuiltin = balanced4\npreprocessor = " + f.path + "\n", "cfg");
        REQUIRE(cfg.preprocessor.has_value());
        CHECK(cfg.preprocessor->P.rows() == 3);
        CHECK(cfg.preprocessor->P.cols() == 6);
        CHECK(cfg.preprocessor->range_kind == RangeKind::Slab);
        CHECK(cfg.preprocessor->name == f.path);
    }
    SUBCASE("rational entries and comments") {
        const TempFile f("test_config_mat.txt", "1/2 0 # trailing\n0 -3/4\n");
        const RationalMatrix m = load_matrix_file(f.path);
        CHECK(m.rows() == 2);
        CHECK(m.at(0, 0) == Rational(1, 2));
        CHECK(m.at(1, 1) == Rational(-3, 4));
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_matrix_file("does_not_exist.txt"), ParseError);
        CHECK_THROWS_AS(load_config("does_not_exist.ini"), ParseError);
    }
    SUBCASE("ragged matrix file") {
        const TempFile f("test_config_bad.txt", "1 2 3\n4 5\n");
        CHECK_THROWS_AS(load_matrix_file(f.path), ParseError);
    }
}

TEST_CASE("load_config reads from disk") {
    const TempFile f("test_config_full.ini",
                     "[scheme]\n"
                     "builtin = balanced5\n"
                     "preprocessor = p5\n");
    const ProblemConfig cfg = load_config(f.path);
    CHECK(cfg.path == f.path);
    CHECK(cfg.scheme->L == 5);
    CHECK(cfg.preprocessor->P.rows() == 4);
    CHECK(cfg.system().size() == 10);
}
