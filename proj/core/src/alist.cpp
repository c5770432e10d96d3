#include "ddecc/alist.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "ddecc/error.hpp"

namespace ddecc {

namespace {

class TokenReader {
public:
    explicit TokenReader(std::string_view text) : text_(text) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    long next(const char* what) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(std::string("alist: unexpected end of input reading ") + what);
        long value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || (ptr != end && !is_space(*ptr)))
            throw ParseError(std::string("alist: malformed integer while reading ") + what);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    // Peeks whether the next token is a literal 0 (padding).
    bool next_is_zero() {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '0') return false;
        return pos_ + 1 >= text_.size() || is_space(text_[pos_ + 1]);
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::vector<std::vector<std::size_t>> read_lists(TokenReader& in, const std::vector<long>& degrees,
                                                 long limit, const char* what) {
    std::vector<std::vector<std::size_t>> lists(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        for (long j = 0; j < degrees[i]; ++j) {
            const long idx = in.next(what);
            if (idx < 1 || idx > limit)
                throw ParseError(std::string("alist: ") + what + " index " + std::to_string(idx) +
                                 " out of range [1," + std::to_string(limit) + "]");
            lists[i].push_back(static_cast<std::size_t>(idx - 1));
        }
        while (in.next_is_zero()) in.next(what);
    }
    return lists;
}

}  // namespace

ParityCheckMatrix load_alist(std::string_view text) {
    TokenReader in(text);
    const long n = in.next("n");
    const long m = in.next("m");
    if (n <= 0 || m <= 0 || m >= n)
        throw ParseError("alist: header must satisfy 0 < m < n (got n=" + std::to_string(n) +
                         ", m=" + std::to_string(m) + ")");
    const long max_col = in.next("max column degree");
    const long max_row = in.next("max row degree");

    auto read_degrees = [&](long count, long max_deg, const char* what) {
        std::vector<long> out(static_cast<std::size_t>(count));
        for (auto& d : out) {
            d = in.next(what);
            if (d < 0 || d > max_deg)
                throw ParseError(std::string("alist: ") + what + " " + std::to_string(d) +
                                 " exceeds declared maximum " + std::to_string(max_deg));
        }
        return out;
    };
    const auto col_deg = read_degrees(n, max_col, "column degree");
    const auto row_deg = read_degrees(m, max_row, "row degree");

    auto col_lists = read_lists(in, col_deg, m, "column neighbour");
    auto row_lists = read_lists(in, row_deg, n, "row neighbour");
    if (!in.at_end()) throw ParseError("alist: trailing data after row lists");

    // Cross-check: both views must describe the same edge set.
    std::vector<std::vector<std::size_t>> from_cols(static_cast<std::size_t>(m));
    for (std::size_t c = 0; c < col_lists.size(); ++c)
        for (auto r : col_lists[c]) from_cols[r].push_back(c);
    for (std::size_t r = 0; r < row_lists.size(); ++r) {
        auto a = row_lists[r];
        auto b = from_cols[r];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw ParseError("alist: row " + std::to_string(r + 1) +
                             " list disagrees with the column lists (check header order)");
    }
    return ParityCheckMatrix(static_cast<std::size_t>(n), std::move(row_lists));
}

ParityCheckMatrix load_alist_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open alist file '" + path.string() + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return load_alist(buf.str());
}

std::string to_alist(const ParityCheckMatrix& h) {
    std::size_t max_col = 0;
    std::size_t max_row = 0;
    for (std::size_t c = 0; c < h.n(); ++c) max_col = std::max(max_col, h.col_support(c).size());
    for (std::size_t r = 0; r < h.checks(); ++r) max_row = std::max(max_row, h.row_support(r).size());

    std::ostringstream out;
    out << h.n() << ' ' << h.checks() << '\n' << max_col << ' ' << max_row << '\n';
    for (std::size_t c = 0; c < h.n(); ++c) out << (c ? " " : "") << h.col_support(c).size();
    out << '\n';
    for (std::size_t r = 0; r < h.checks(); ++r) out << (r ? " " : "") << h.row_support(r).size();
    out << '\n';
    auto emit = [&](const std::vector<std::size_t>& list, std::size_t width) {
        for (std::size_t j = 0; j < width; ++j) {
            if (j) out << ' ';
            out << (j < list.size() ? list[j] + 1 : 0);
        }
        out << '\n';
    };
    for (std::size_t c = 0; c < h.n(); ++c) emit(h.col_support(c), max_col);
    for (std::size_t r = 0; r < h.checks(); ++r) emit(h.row_support(r), max_row);
    return out.str();
}

}  // namespace ddecc
