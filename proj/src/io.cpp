#include "multiroot/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "multiroot/errors.hpp"

namespace multiroot {

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double x)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ec == std::errc() ? end : buf);
}

namespace {

std::vector<std::string> field_names(int n)
{
    if (n == 2) {
        return {"u", "v"};
    }
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? "u" : "u" + std::to_string(i + 1));
    }
    return out;
}

} // namespace

std::string coefficients_csv(const DiscreteSystem& sys, const Vector& a, const std::string& preamble)
{
    if (a.size() != sys.size()) {
        throw DimensionMismatch("coefficient vector does not match the system");
    }
    std::ostringstream os;
    std::istringstream pre(preamble);
    for (std::string line; std::getline(pre, line);) {
        os << "# " << line << "\n";
    }
    const Eigen::Index nb = sys.modes_per_dim();
    os << (sys.dim() == 1 ? "field,kx,value\n" : "field,kx,ky,value\n");
    for (int i = 0; i < sys.n_fields(); ++i) {
        for (Eigen::Index m = 0; m < sys.field_size(); ++m) {
            os << i << "," << m % nb;
            if (sys.dim() == 2) {
                os << "," << m / nb;
            }
            os << "," << format_double(a[i * sys.field_size() + m]) << "\n";
        }
    }
    return os.str();
}

CoefficientFile parse_coefficients_csv(const std::string& text)
{
    CoefficientFile out;
    std::vector<double> values;
    std::istringstream in(text);
    bool header = false;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            out.preamble += line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1) + "\n";
            continue;
        }
        if (!header) {
            if (line.rfind("field,", 0) != 0) {
                throw ParseError(line_no, "expected a coefficient header");
            }
            header = true;
            continue;
        }
        const auto pos = line.rfind(',');
        const std::string cell = line.substr(pos == std::string::npos ? 0 : pos + 1);
        double x = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (ec != std::errc() || end != cell.data() + cell.size()) {
            throw ParseError(line_no, "bad coefficient '" + cell + "'");
        }
        values.push_back(x);
    }
    if (!header) {
        throw ConfigError("coefficient file has no header");
    }
    out.values = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return out;
}

std::string grid_csv(const DiscreteSystem& sys, const Vector& a, int resolution)
{
    const Matrix values = sys.to_grid(a, resolution);
    const auto axes = sys.grid_axes(resolution);
    std::ostringstream os;
    os << (sys.dim() == 1 ? "x" : "x,y");
    for (const auto& name : field_names(sys.n_fields())) {
        os << "," << name;
    }
    os << "\n";
    for (Eigen::Index p = 0; p < values.rows(); ++p) {
        os << format_double(axes[0][p % resolution]);
        if (sys.dim() == 2) {
            os << "," << format_double(axes[1][p / resolution]);
        }
        for (Eigen::Index i = 0; i < values.cols(); ++i) {
            os << "," << format_double(values(p, i));
        }
        os << "\n";
    }
    return os.str();
}

std::string trace_csv(const LMTrace& trace)
{
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

} // namespace multiroot
