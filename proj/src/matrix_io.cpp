#include "capmax/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "capmax/errors.hpp"

namespace capmax {

namespace {

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    out += buf;
}

double parse_double(const char*& s) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s) throw InvalidArgument("matrix file: malformed number");
    s = end;
    return v;
}

std::string header_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) return line;
    }
    throw InvalidArgument("matrix file: missing header");
}

} // namespace

void write_matrix(std::ostream& os, const CMatrix& A) {
    std::string buf;
    buf.reserve(48 * static_cast<std::size_t>(A.cols()) + 16);
    os << A.rows() << ' ' << A.cols() << " complex\n";
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        buf.clear();
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            if (j) buf += ' ';
            format_double(buf, A(i, j).real());
            buf += ',';
            format_double(buf, A(i, j).imag());
        }
        buf += '\n';
        os << buf;
    }
}

void write_matrix_file(const std::string& path, const CMatrix& A) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("cannot open " + path + " for writing");
    write_matrix(os, A);
    if (!os) throw InvalidArgument("failed writing " + path);
}

CMatrix read_matrix(std::istream& is) {
    std::istringstream hs(header_line(is));
    Eigen::Index rows = 0, cols = 0;
    std::string kind;
    if (!(hs >> rows >> cols >> kind) || kind != "complex" || rows < 0 || cols < 0)
        throw InvalidArgument("matrix file: bad header (want \"<rows> <cols> complex\")");
    CMatrix A(rows, cols);
    std::string line;
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::getline(is, line))
            throw InvalidArgument("matrix file: truncated at row " + std::to_string(i));
        const char* s = line.c_str();
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = parse_double(s);
            if (*s != ',')
                throw InvalidArgument("matrix file: expected ',' between re and im");
            ++s;
            const double im = parse_double(s);
            A(i, j) = Complex(re, im);
        }
    }
    return A;
}

CMatrix read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open " + path);
    return read_matrix(is);
}

void write_vector_file(const std::string& path, const CVector& v) {
    write_matrix_file(path, v);
}

CVector read_vector_file(const std::string& path) {
    const CMatrix A = read_matrix_file(path);
    if (A.cols() != 1)
        throw InvalidArgument(path + ": expected a single-column vector file");
    return A.col(0);
}

void write_real_vector_file(const std::string& path, const RVector& v) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("cannot open " + path + " for writing");
    os << v.size() << " 1 real\n";
    std::string buf;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        buf.clear();
        format_double(buf, v[i]);
        buf += '\n';
        os << buf;
    }
    if (!os) throw InvalidArgument("failed writing " + path);
}

RVector read_real_vector_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open " + path);
    std::istringstream hs(header_line(is));
    Eigen::Index n = 0, one = 0;
    std::string kind;
    if (!(hs >> n >> one >> kind) || kind != "real" || one != 1 || n < 0)
        throw InvalidArgument(path + ": bad header (want \"<n> 1 real\")");
    RVector v(n);
    std::string line;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw InvalidArgument(path + ": truncated at entry " + std::to_string(i));
        const char* s = line.c_str();
        v[i] = parse_double(s);
    }
    return v;
}

} // namespace capmax
