#include "multivenc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mvenc {

namespace {

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    const std::size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> parse_sections(const std::string& text,
                                              const std::string& label) {
    std::map<std::string, Section> sections;
    std::string current = "";
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(label + ":" + std::to_string(lineno) + ": unterminated section");
            }
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(label + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(label + ":" + std::to_string(lineno) + ": empty key");
        }
        sections[current][key] = value;
    }
    return sections;
}

std::vector<double> parse_reals(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_real(tok));
    return out;
}

RationalMatrix rows_to_matrix(const std::vector<RationalVector>& rows,
                              const std::string& what) {
    if (rows.empty()) throw ParseError(what + ": no rows");
    const int cols = static_cast<int>(rows[0].size());
    RationalMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != cols) {
            throw ParseError(what + ": ragged rows");
        }
        for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = rows[r][c];
    }
    return m;
}

} // namespace

double parse_real(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ParseError("empty numeric value");
    const std::size_t pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size()) throw ParseError("invalid number '" + s + "'");
        return v;
    }
    // <factor> pi [/ <divisor>]
    double factor = 1.0;
    const std::string head = trim(s.substr(0, pi_pos));
    if (!head.empty()) {
        if (head == "-") {
            factor = -1.0;
        } else {
            char* end = nullptr;
            factor = std::strtod(head.c_str(), &end);
            if (end != head.c_str() + head.size()) {
                throw ParseError("invalid number '" + s + "'");
            }
        }
    }
    double divisor = 1.0;
    std::string tail = trim(s.substr(pi_pos + 2));
    if (!tail.empty()) {
        if (tail.front() != '/') throw ParseError("invalid number '" + s + "'");
        tail = trim(tail.substr(1));
        char* end = nullptr;
        divisor = std::strtod(tail.c_str(), &end);
        if (end != tail.c_str() + tail.size() || divisor == 0.0) {
            throw ParseError("invalid number '" + s + "'");
        }
    }
    return factor * M_PI / divisor;
}

DifferenceSystem ProblemConfig::system() const {
    if (scheme) return build_difference_system(*scheme);
    if (direct) return *direct;
    throw ParseError("config has neither a [scheme] nor a [difference] section");
}

RationalMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path + "'");
    std::vector<RationalVector> rows;
    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        auto parsed = parse_rational_rows(line);
        for (auto& r : parsed) rows.push_back(std::move(r));
    }
    return rows_to_matrix(rows, path);
}

ProblemConfig parse_config_text(const std::string& text, const std::string& label) {
    const auto sections = parse_sections(text, label);
    ProblemConfig cfg;
    cfg.path = label;

    const auto scheme_it = sections.find("scheme");
    const auto diff_it = sections.find("difference");
    if (scheme_it == sections.end() && diff_it == sections.end()) {
        throw ParseError(label + ": need a [scheme] or [difference] section");
    }

    std::string preproc_value;

    if (scheme_it != sections.end()) {
        const Section& sec = scheme_it->second;
        EncodingScheme s;
        const auto builtin = sec.find("builtin");
        if (builtin != sec.end()) {
            s = builtin_scheme(builtin->second);
        } else {
            const auto moments = sec.find("moments");
            if (moments == sec.end()) {
                throw ParseError(label + ": [scheme] needs 'builtin' or 'moments'");
            }
            s.moments = rows_to_matrix(parse_rational_rows(moments->second), "moments");
            if (s.moments.cols() != 3) throw ParseError(label + ": moments rows must have 3 entries");
            s.L = s.moments.rows();
            s.gamma_m = M_PI / 100.0;
            s.noise_std = 0.2;
            s.magnitudes.assign(s.L, 1.0);
        }
        if (const auto it = sec.find("L"); it != sec.end()) {
            if (std::stoi(it->second) != s.L) {
                throw ParseError(label + ": L does not match the number of moment rows");
            }
        }
        if (const auto it = sec.find("gamma_m"); it != sec.end()) s.gamma_m = parse_real(it->second);
        if (const auto it = sec.find("noise_std"); it != sec.end()) {
            s.noise_std = parse_real(it->second);
        }
        if (const auto it = sec.find("magnitudes"); it != sec.end()) {
            s.magnitudes = parse_reals(it->second);
        }
        s.validate();
        cfg.scheme = std::move(s);
        if (const auto it = sec.find("preprocessor"); it != sec.end()) preproc_value = it->second;
    }

    if (diff_it != sections.end()) {
        const Section& sec = diff_it->second;
        const auto rows = sec.find("rows");
        if (rows == sec.end()) throw ParseError(label + ": [difference] needs 'rows'");
        RationalMatrix m = rows_to_matrix(parse_rational_rows(rows->second), "difference rows");
        double scale = 1.0;
        if (const auto it = sec.find("scale"); it != sec.end()) scale = parse_real(it->second);
        cfg.direct = direct_system(std::move(m), scale);
        if (const auto it = sec.find("preprocessor"); it != sec.end()) preproc_value = it->second;
    }

    if (!preproc_value.empty()) {
        if (preproc_value == "p91" || preproc_value == "p10" || preproc_value == "p5") {
            cfg.preprocessor = builtin_preprocessor(preproc_value);
        } else {
            Preprocessor p;
            p.P = load_matrix_file(preproc_value);
            p.name = preproc_value;
            p.range_kind = RangeKind::Slab;
            cfg.preprocessor = std::move(p);
        }
    }
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ProblemConfig cfg = parse_config_text(buf.str(), path);
    cfg.path = path;
    return cfg;
}

} // namespace mvenc
