#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace limo {

// Error taxonomy mapped to CLI exit codes: usage=2, data=3, internal=4.
enum class ErrorKind { usage, data, internal };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
            : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) {
    return Error(ErrorKind::usage, msg);
}
inline Error data_error(const std::string& msg) {
    return Error(ErrorKind::data, msg);
}
inline Error internal_error(const std::string& msg) {
    return Error(ErrorKind::internal, msg);
}

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Column-major is never used: rows are rows. m[r][c].
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return Mat3{}; }

    // Columns are the frame axes expressed in the outer frame.
    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 r;
        r.m[0][0] = c0.x; r.m[1][0] = c0.y; r.m[2][0] = c0.z;
        r.m[0][1] = c1.x; r.m[1][1] = c1.y; r.m[2][1] = c1.z;
        r.m[0][2] = c2.x; r.m[1][2] = c2.y; r.m[2][2] = c2.z;
        return r;
    }

    Vec3 col(int c) const { return {m[0][c], m[1][c], m[2][c]}; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++) {
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] +
                        m[i][2] * o.m[2][j];
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++) r.m[i][j] = m[j][i];
        return r;
    }

    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    static Mat3 rot_x(double a) {
        Mat3 r;
        double c = std::cos(a), s = std::sin(a);
        r.m[0][0] = 1; r.m[0][1] = 0; r.m[0][2] = 0;
        r.m[1][0] = 0; r.m[1][1] = c; r.m[1][2] = -s;
        r.m[2][0] = 0; r.m[2][1] = s; r.m[2][2] = c;
        return r;
    }
    static Mat3 rot_y(double a) {
        Mat3 r;
        double c = std::cos(a), s = std::sin(a);
        r.m[0][0] = c;  r.m[0][1] = 0; r.m[0][2] = s;
        r.m[1][0] = 0;  r.m[1][1] = 1; r.m[1][2] = 0;
        r.m[2][0] = -s; r.m[2][1] = 0; r.m[2][2] = c;
        return r;
    }
    static Mat3 rot_z(double a) {
        Mat3 r;
        double c = std::cos(a), s = std::sin(a);
        r.m[0][0] = c; r.m[0][1] = -s; r.m[0][2] = 0;
        r.m[1][0] = s; r.m[1][1] = c;  r.m[1][2] = 0;
        r.m[2][0] = 0; r.m[2][1] = 0;  r.m[2][2] = 1;
        return r;
    }

    // Rodrigues rotation about a unit axis.
    static Mat3 about_axis(const Vec3& axis, double angle);
};

inline Mat3 Mat3::about_axis(const Vec3& axis, double angle) {
    double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    double x = axis.x, y = axis.y, z = axis.z;
    Mat3 r;
    r.m[0][0] = t * x * x + c;
    r.m[0][1] = t * x * y - s * z;
    r.m[0][2] = t * x * z + s * y;
    r.m[1][0] = t * x * y + s * z;
    r.m[1][1] = t * y * y + c;
    r.m[1][2] = t * y * z - s * x;
    r.m[2][0] = t * x * z - s * y;
    r.m[2][1] = t * y * z + s * x;
    r.m[2][2] = t * z * z + c;
    return r;
}

// Rotate v about unit axis by angle (cheaper than building the matrix).
inline Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

// Wrap into (-pi, pi].
inline double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

// Smallest signed angular difference a-b wrapped into (-pi, pi].
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

// Row-major dense matrices. Small enough scales that a plain vector wins.
struct MatD {
    size_t rows = 0, cols = 0;
    std::vector<double> data;

    MatD() = default;
    MatD(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }
    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

struct MatF {
    size_t rows = 0, cols = 0;
    std::vector<float> data;

    MatF() = default;
    MatF(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

    float* row(size_t r) { return data.data() + r * cols; }
    const float* row(size_t r) const { return data.data() + r * cols; }
};

inline MatF to_f32(const MatD& m) {
    MatF out(m.rows, m.cols);
    for (size_t i = 0; i < m.data.size(); i++)
        out.data[i] = static_cast<float>(m.data[i]);
    return out;
}

// Number of worker threads: min(hardware, LIMO_THREADS if set).
size_t worker_threads();

// Chunked parallel loop. fn(begin, end) runs on disjoint ranges; results must
// be written to preallocated slots so the output is schedule-independent.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace limo
