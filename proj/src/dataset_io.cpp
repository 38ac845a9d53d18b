#include "depstat/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "depstat/textio.hpp"

namespace depstat {

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines = split(text, '\n');
    // tolerate CRLF input and a trailing newline
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r')
            l.pop_back();
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    return lines;
}

// header must read x1..xp,y1..yq for some p, q >= 1
std::pair<int, int> parse_header(const std::string& header) {
    const std::vector<std::string> cols = split(header, ',');
    int p = 0;
    std::size_t i = 0;
    while (i < cols.size() && cols[i] == "x" + std::to_string(p + 1)) {
        ++p;
        ++i;
    }
    int q = 0;
    while (i < cols.size() && cols[i] == "y" + std::to_string(q + 1)) {
        ++q;
        ++i;
    }
    if (p < 1 || q < 1 || i != cols.size())
        throw ParseError("dataset header must be x1..xp,y1..yq", 1);
    return {p, q};
}

}  // namespace

std::string dataset_to_csv(const PairedSample& sample) {
    std::string out;
    for (int j = 0; j < sample.p(); ++j) {
        if (j)
            out += ',';
        out += "x" + std::to_string(j + 1);
    }
    for (int j = 0; j < sample.q(); ++j)
        out += ",y" + std::to_string(j + 1);
    out += '\n';
    for (int i = 0; i < sample.n(); ++i) {
        for (int j = 0; j < sample.p(); ++j) {
            if (j)
                out += ',';
            out += fmt_g17(sample.x(i, j));
        }
        for (int j = 0; j < sample.q(); ++j) {
            out += ',';
            out += fmt_g17(sample.y(i, j));
        }
        out += '\n';
    }
    return out;
}

PairedSample parse_dataset_csv(const std::string& text) {
    const std::vector<std::string> lines = lines_of(text);
    if (lines.empty())
        throw ParseError("empty dataset", 1);
    const auto [p, q] = parse_header(lines[0]);

    const long n = static_cast<long>(lines.size()) - 1;
    if (n < 2)
        throw ParseError("dataset needs at least 2 data rows", static_cast<long>(lines.size()));

    Eigen::MatrixXd x(n, p), y(n, q);
    for (long r = 0; r < n; ++r) {
        const long line_no = r + 2;
        const std::vector<std::string> fields = split(lines[static_cast<std::size_t>(r) + 1], ',');
        if (static_cast<int>(fields.size()) != p + q)
            throw ParseError("expected " + std::to_string(p + q) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        for (int j = 0; j < p + q; ++j) {
            double v;
            if (!parse_double(fields[static_cast<std::size_t>(j)], v))
                throw ParseError("bad numeric field '" + fields[static_cast<std::size_t>(j)] + "'",
                                 line_no);
            if (j < p)
                x(r, j) = v;
            else
                y(r, j - p) = v;
        }
    }
    return PairedSample(std::move(x), std::move(y));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failure on '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out)
        throw IoError("write failure on '" + path + "'");
}

}  // namespace depstat
