#include "gthkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gthkit/errors.hpp"

namespace gthkit {

namespace {

struct Token {
    std::string text;
    int line = 0;  // 1-based
    int col = 0;   // 1-based character column of the first character
};

std::string at_position(const Token& tok) {
    return " at line " + std::to_string(tok.line) + " column " + std::to_string(tok.col);
}

// Whole stream to whitespace-separated tokens, '#' to end of line dropped.
std::vector<Token> tokenize(std::istream& in) {
    std::vector<Token> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            tokens.push_back(
                Token{line.substr(start, i - start), lineno, static_cast<int>(start) + 1});
        }
    }
    return tokens;
}

int parse_size_token(const Token& tok) {
    char* end = nullptr;
    const long n = std::strtol(tok.text.c_str(), &end, 10);
    if (end == tok.text.c_str() || *end != '\0' || n < 1)
        throw ValidationError("matrix text: bad size '" + tok.text + "'" + at_position(tok));
    return static_cast<int>(n);
}

double parse_double_text(const std::string& tok) {
    const std::size_t slash = tok.find('/');
    if (slash != std::string::npos) {
        const std::string a = tok.substr(0, slash), b = tok.substr(slash + 1);
        char *ea = nullptr, *eb = nullptr;
        const double num = std::strtod(a.c_str(), &ea);
        const double den = std::strtod(b.c_str(), &eb);
        if (a.empty() || b.empty() || *ea != '\0' || *eb != '\0' || den == 0.0)
            throw ValidationError("bad fraction '" + tok + "'");
        return num / den;
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ValidationError("bad number '" + tok + "'");
    return v;
}

double parse_double_token(const Token& tok) {
    try {
        return parse_double_text(tok.text);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(e.what()) + at_position(tok));
    }
}

// "a/b" is the exact fraction; a decimal token means the double it parses
// to, so files written by the double writer solve the same matrix here.
Rational parse_rational_token(const Token& tok) {
    if (tok.text.find('/') != std::string::npos) {
        Rational q;
        if (mpq_set_str(q.get_mpq_t(), tok.text.c_str(), 10) != 0 || q.get_den() == 0)
            throw ValidationError("bad fraction '" + tok.text + "'" + at_position(tok));
        q.canonicalize();
        return q;
    }
    return Rational(parse_double_token(tok));
}

template <typename Matrix, typename Parse>
Matrix read_square(std::istream& in, Parse parse) {
    const std::vector<Token> tokens = tokenize(in);
    if (tokens.empty()) throw ValidationError("matrix text: empty input");
    const int n = parse_size_token(tokens[0]);
    const std::size_t need = 1 + static_cast<std::size_t>(n) * n;
    if (tokens.size() < need)
        throw ValidationError("matrix text: expected " + std::to_string(need - 1) +
                              " entries for size " + std::to_string(n) + ", found " +
                              std::to_string(tokens.size() - 1));
    if (tokens.size() > need)
        throw ValidationError("matrix text: trailing token '" + tokens[need].text + "'" +
                              at_position(tokens[need]));
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = parse(tokens[1 + static_cast<std::size_t>(i) * n + j]);
    return m;
}

// DenseMatrix has a (rows, cols) constructor and operator(); adapt it to the
// shared reader.
struct DenseAdapter {
    DenseMatrix m;
    explicit DenseAdapter(int n) : m(n, n) {}
    double& at(int i, int j) { return m(i, j); }
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

DenseMatrix read_matrix_text(std::istream& in) {
    return read_square<DenseAdapter>(in, parse_double_token).m;
}

DenseMatrix read_matrix_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_matrix_text(in);
}

RationalMatrix read_rational_matrix_text(std::istream& in) {
    return read_square<RationalMatrix>(in, parse_rational_token);
}

RationalMatrix read_rational_matrix_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_rational_matrix_text(in);
}

std::string format_exact(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_csv_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_matrix_text(std::ostream& out, const DenseMatrix& m) {
    out << m.rows() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_exact(m(i, j));
        }
        out << '\n';
    }
}

void write_matrix_file(const std::string& path, const DenseMatrix& m) {
    std::ofstream out = open_output(path);
    write_matrix_text(out, m);
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

void write_probability_csv(std::ostream& out, const ProbabilityVector& pi) {
    out << "state,probability\n";
    for (int j = 0; j < pi.n(); ++j) out << j + 1 << ',' << format_csv_value(pi[j]) << '\n';
}

void write_rg_factors(std::ostream& out, const RgFactors& f) {
    auto rows = [&](const DenseMatrix& m) {
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) {
                if (j > 0) out << ' ';
                out << format_exact(m(i, j));
            }
            out << '\n';
        }
    };
    out << f.n << '\n';
    out << "R\n";
    rows(f.r_measures);
    out << "PSI\n";
    for (int j = 0; j < f.n; ++j) {
        if (j > 0) out << ' ';
        out << format_exact(f.return_probs[j]);
    }
    out << '\n';
    out << "G\n";
    rows(f.g_measures);
}

RgFactors read_rg_factors(std::istream& in) {
    const std::vector<Token> tokens = tokenize(in);
    if (tokens.empty()) throw ValidationError("factor text: empty input");
    const int n = parse_size_token(tokens[0]);
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const std::size_t need = 1 + (1 + nn) + (1 + static_cast<std::size_t>(n)) + (1 + nn);
    if (tokens.size() != need)
        throw ValidationError("factor text: wrong token count for size " + std::to_string(n));
    std::size_t at = 1;
    auto expect = [&](const char* marker) {
        if (tokens[at].text != marker)
            throw ValidationError(std::string("factor text: expected section '") + marker +
                                  "', found '" + tokens[at].text + "'" + at_position(tokens[at]));
        ++at;
    };
    RgFactors f;
    f.n = n;
    f.r_measures = DenseMatrix(n, n);
    f.g_measures = DenseMatrix(n, n);
    f.return_probs.resize(n);
    expect("R");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.r_measures(i, j) = parse_double_token(tokens[at++]);
    expect("PSI");
    for (int j = 0; j < n; ++j) f.return_probs[j] = parse_double_token(tokens[at++]);
    expect("G");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.g_measures(i, j) = parse_double_token(tokens[at++]);
    return f;
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

int parse_label(const std::string& piece, int n) {
    char* end = nullptr;
    const long v = std::strtol(piece.c_str(), &end, 10);
    if (end == piece.c_str() || *end != '\0')
        throw ValidationError("subset: bad state label '" + piece + "'");
    if (v < 1 || v > n)
        throw ValidationError("subset: state " + std::to_string(v) + " outside [1," +
                              std::to_string(n) + "]");
    return static_cast<int>(v);
}

}  // namespace

std::vector<int> parse_subset(const std::string& text, int n) {
    std::string body = text;
    if (body.rfind("E=", 0) == 0) body.erase(0, 2);
    std::vector<int> states;
    for (const std::string& piece : split_commas(body)) {
        if (piece.empty()) throw ValidationError("subset: empty element in '" + text + "'");
        const std::size_t dots = piece.find("..");
        if (dots != std::string::npos) {
            const int lo = parse_label(piece.substr(0, dots), n);
            const int hi = parse_label(piece.substr(dots + 2), n);
            if (lo > hi) throw ValidationError("subset: empty range '" + piece + "'");
            for (int s = lo; s <= hi; ++s) states.push_back(s);
        } else {
            states.push_back(parse_label(piece, n));
        }
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return states;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& piece : split_commas(text)) {
        char* end = nullptr;
        const long v = std::strtol(piece.c_str(), &end, 10);
        if (piece.empty() || end == piece.c_str() || *end != '\0' || v < 1)
            throw ValidationError("list: bad positive integer '" + piece + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& piece : split_commas(text)) {
        char* end = nullptr;
        const double v = std::strtod(piece.c_str(), &end);
        if (piece.empty() || end == piece.c_str() || *end != '\0')
            throw ValidationError("list: bad number '" + piece + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace gthkit
