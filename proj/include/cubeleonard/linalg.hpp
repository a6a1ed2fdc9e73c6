#pragma once

#include "cubeleonard/exactnum.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubeleonard {

using Index = std::size_t;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotNilpotentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvariantError : public std::runtime_error {
 public:
  NotInvariantError(Index vector_index, const std::string& what)
      : std::runtime_error(what), vector_index_(vector_index) {}
  Index vector_index() const { return vector_index_; }

 private:
  Index vector_index_;
};

class SparseVector {
 public:
  using Entry = std::pair<Index, GaussianRational>;

  SparseVector() = default;
  explicit SparseVector(Index dim) : dim_(dim) {}

  // Sorts, sums duplicates, drops zeros.
  static SparseVector from_entries(Index dim, std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVector v(dim);
    for (auto& e : entries) {
      if (e.first >= dim) throw DimensionError("vector index out of range");
      if (!v.entries_.empty() && v.entries_.back().first == e.first)
        v.entries_.back().second += e.second;
      else
        v.entries_.push_back(std::move(e));
    }
    v.drop_zeros();
    return v;
  }

  static SparseVector unit(Index dim, Index k, GaussianRational value = 1) {
    if (k >= dim) throw DimensionError("unit vector index out of range");
    SparseVector v(dim);
    if (!value.is_zero()) v.entries_.emplace_back(k, std::move(value));
    return v;
  }

  static SparseVector from_dense(const std::vector<GaussianRational>& values) {
    SparseVector v(values.size());
    for (Index k = 0; k < values.size(); ++k)
      if (!values[k].is_zero()) v.entries_.emplace_back(k, values[k]);
    return v;
  }

  Index dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  const GaussianRational* find(Index k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, Index key) { return e.first < key; });
    if (it == entries_.end() || it->first != k) return nullptr;
    return &it->second;
  }

  GaussianRational at(Index k) const {
    const GaussianRational* p = find(k);
    return p ? *p : GaussianRational();
  }

  std::vector<GaussianRational> to_dense() const {
    std::vector<GaussianRational> out(dim_);
    for (const auto& [k, v] : entries_) out[k] = v;
    return out;
  }

  SparseVector& operator*=(const GaussianRational& c) {
    if (c.is_zero()) {
      entries_.clear();
      return *this;
    }
    for (auto& e : entries_) e.second *= c;
    return *this;
  }
  SparseVector& operator/=(const GaussianRational& c) { return *this *= c.inverse(); }

  // First nonzero coordinate becomes 1.
  SparseVector normalized() const {
    SparseVector out = *this;
    if (!out.entries_.empty() && !out.entries_.front().second.is_one()) out /= out.entries_.front().second;
    return out;
  }

  // this += c * other
  void axpy(const GaussianRational& c, const SparseVector& other) {
    if (other.dim_ != dim_) throw DimensionError("axpy dimension mismatch");
    if (c.is_zero() || other.entries_.empty()) return;
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        merged.push_back(std::move(*a++));
      } else if (a == entries_.end() || b->first < a->first) {
        merged.emplace_back(b->first, c * b->second);
        ++b;
      } else {
        a->second.add_product(c, b->second);
        if (!a->second.is_zero()) merged.push_back(std::move(*a));
        ++a;
        ++b;
      }
    }
    entries_ = std::move(merged);
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) {
    a.axpy(1, b);
    return a;
  }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) {
    a.axpy(-1, b);
    return a;
  }
  friend SparseVector operator*(const GaussianRational& c, SparseVector v) { return v *= c; }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  void drop_zeros() {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second.is_zero(); }),
                   entries_.end());
  }

  Index dim_ = 0;
  std::vector<Entry> entries_;
};

struct VectorBasis {
  Index ambient_dim = 0;
  std::vector<SparseVector> vectors;

  std::size_t size() const { return vectors.size(); }
  const SparseVector& operator[](std::size_t k) const { return vectors[k]; }
};

// Sparse matrix over Q(i) in compressed-row form. No stored zeros.
class ExactMatrix {
 public:
  struct Entry {
    Index row;
    Index col;
    GaussianRational value;
  };

  ExactMatrix() : row_ptr_(1, 0) {}
  ExactMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static ExactMatrix from_entries(Index rows, Index cols, std::vector<Entry> entries) {
    for (const auto& e : entries)
      if (e.row >= rows || e.col >= cols) throw DimensionError("matrix entry out of range");
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    ExactMatrix m(rows, cols);
    Index k = 0;
    for (Index r = 0; r < rows; ++r) {
      while (k < entries.size() && entries[k].row == r) {
        Index c = entries[k].col;
        GaussianRational v = std::move(entries[k].value);
        ++k;
        while (k < entries.size() && entries[k].row == r && entries[k].col == c) v += entries[k++].value;
        if (!v.is_zero()) {
          m.col_idx_.push_back(c);
          m.values_.push_back(std::move(v));
        }
      }
      m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
  }

  static ExactMatrix from_rows(Index cols, const std::vector<SparseVector>& rows) {
    ExactMatrix m(rows.size(), cols);
    for (Index r = 0; r < rows.size(); ++r) {
      if (rows[r].dim() != cols) throw DimensionError("row length mismatch");
      for (const auto& [c, v] : rows[r].entries()) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
      m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
  }

  static ExactMatrix from_columns(Index rows, const std::vector<SparseVector>& cols) {
    return from_rows(rows, cols).transpose();
  }

  static ExactMatrix identity(Index n) { return scalar(n, 1); }

  static ExactMatrix scalar(Index n, const GaussianRational& c) {
    ExactMatrix m(n, n);
    if (c.is_zero()) return m;
    for (Index r = 0; r < n; ++r) {
      m.col_idx_.push_back(r);
      m.values_.push_back(c);
      m.row_ptr_[r + 1] = r + 1;
    }
    return m;
  }

  static ExactMatrix diagonal(const std::vector<GaussianRational>& d) {
    ExactMatrix m(d.size(), d.size());
    for (Index r = 0; r < d.size(); ++r) {
      if (!d[r].is_zero()) {
        m.col_idx_.push_back(r);
        m.values_.push_back(d[r]);
      }
      m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
  }

  static ExactMatrix from_dense(const std::vector<std::vector<GaussianRational>>& rows) {
    Index nc = rows.empty() ? 0 : rows.front().size();
    std::vector<SparseVector> rv;
    for (const auto& row : rows) {
      if (row.size() != nc) throw DimensionError("ragged dense matrix");
      rv.push_back(SparseVector::from_dense(row));
    }
    return from_rows(nc, rv);
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool is_zero() const { return values_.empty(); }

  std::size_t row_begin(Index r) const { return row_ptr_[r]; }
  std::size_t row_end(Index r) const { return row_ptr_[r + 1]; }
  Index col_at(std::size_t k) const { return col_idx_[k]; }
  const GaussianRational& value_at(std::size_t k) const { return values_[k]; }

  const GaussianRational* find(Index r, Index c) const {
    if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
    auto b = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    auto e = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    auto it = std::lower_bound(b, e, c);
    if (it == e || *it != c) return nullptr;
    return &values_[static_cast<std::size_t>(it - col_idx_.begin())];
  }

  GaussianRational at(Index r, Index c) const {
    const GaussianRational* p = find(r, c);
    return p ? *p : GaussianRational();
  }

  SparseVector row(Index r) const {
    std::vector<SparseVector::Entry> es;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) es.emplace_back(col_idx_[k], values_[k]);
    return SparseVector::from_entries(cols_, std::move(es));
  }

  SparseVector column(Index c) const {
    std::vector<SparseVector::Entry> es;
    for (Index r = 0; r < rows_; ++r)
      if (const GaussianRational* p = find(r, c)) es.emplace_back(r, *p);
    return SparseVector::from_entries(rows_, std::move(es));
  }

  std::vector<SparseVector> columns() const {
    ExactMatrix t = transpose();
    std::vector<SparseVector> out;
    out.reserve(cols_);
    for (Index c = 0; c < cols_; ++c) out.push_back(t.row(c));
    return out;
  }

  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(nnz());
    for (Index r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_idx_[k], values_[k]});
    return out;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    std::vector<std::size_t> counts(cols_ + 1, 0);
    for (Index c : col_idx_) ++counts[c + 1];
    for (Index c = 0; c < cols_; ++c) counts[c + 1] += counts[c];
    t.row_ptr_ = counts;
    t.col_idx_.resize(nnz());
    t.values_.resize(nnz());
    std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
    for (Index r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        std::size_t dst = next[col_idx_[k]]++;
        t.col_idx_[dst] = r;
        t.values_[dst] = values_[k];
      }
    return t;
  }

  SparseVector apply(const SparseVector& v) const {
    if (v.dim() != cols_) throw DimensionError("matrix-vector dimension mismatch");
    std::vector<SparseVector::Entry> es;
    for (Index r = 0; r < rows_; ++r) {
      GaussianRational acc;
      bool touched = false;
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (const GaussianRational* x = v.find(col_idx_[k])) {
          acc.add_product(values_[k], *x);
          touched = true;
        }
      if (touched && !acc.is_zero()) es.emplace_back(r, std::move(acc));
    }
    return SparseVector::from_entries(rows_, std::move(es));
  }

  GaussianRational trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    GaussianRational t;
    for (Index r = 0; r < rows_; ++r)
      if (const GaussianRational* p = find(r, r)) t += *p;
    return t;
  }

  bool is_diagonal() const {
    for (Index r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (col_idx_[k] != r) return false;
    return true;
  }

  std::vector<GaussianRational> diagonal_entries() const {
    Index n = std::min(rows_, cols_);
    std::vector<GaussianRational> d(n);
    for (Index r = 0; r < n; ++r) d[r] = at(r, r);
    return d;
  }

  ExactMatrix& operator*=(const GaussianRational& c) {
    if (c.is_zero()) return *this = ExactMatrix(rows_, cols_);
    for (auto& v : values_) v *= c;
    return *this;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_ &&
           a.values_ == b.values_;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

  // a + c*b
  static ExactMatrix linear_combination(const ExactMatrix& a, const GaussianRational& c, const ExactMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum dimension mismatch");
    ExactMatrix m(a.rows_, a.cols_);
    for (Index r = 0; r < a.rows_; ++r) {
      std::size_t i = a.row_ptr_[r], ie = a.row_ptr_[r + 1];
      std::size_t j = b.row_ptr_[r], je = b.row_ptr_[r + 1];
      while (i < ie || j < je) {
        if (j == je || (i < ie && a.col_idx_[i] < b.col_idx_[j])) {
          m.col_idx_.push_back(a.col_idx_[i]);
          m.values_.push_back(a.values_[i++]);
        } else if (i == ie || b.col_idx_[j] < a.col_idx_[i]) {
          GaussianRational v = c * b.values_[j];
          if (!v.is_zero()) {
            m.col_idx_.push_back(b.col_idx_[j]);
            m.values_.push_back(std::move(v));
          }
          ++j;
        } else {
          GaussianRational v = a.values_[i];
          v.add_product(c, b.values_[j]);
          if (!v.is_zero()) {
            m.col_idx_.push_back(a.col_idx_[i]);
            m.values_.push_back(std::move(v));
          }
          ++i;
          ++j;
        }
      }
      m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
  }

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) { return linear_combination(a, 1, b); }
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) { return linear_combination(a, -1, b); }
  friend ExactMatrix operator-(ExactMatrix a) { return a *= -1; }
  friend ExactMatrix operator*(const GaussianRational& c, ExactMatrix a) { return a *= c; }

 private:
  friend ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b);
  friend struct MatrixBuilder;

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<GaussianRational> values_;
};

// Row-by-row construction used by the product kernels.
struct MatrixBuilder {
  ExactMatrix m;
  MatrixBuilder(Index rows, Index cols) : m(rows, cols) {
    m.row_ptr_.assign(1, 0);
  }
  void push(Index col, GaussianRational v) {
    m.col_idx_.push_back(col);
    m.values_.push_back(std::move(v));
  }
  void end_row() { m.row_ptr_.push_back(m.col_idx_.size()); }
  ExactMatrix finish() { return std::move(m); }
};

namespace detail {

// Matrix entries as Gaussian integers over one common positive denominator.
struct IntegerImage {
  mpz_class denominator;
  std::vector<std::int64_t> re;
  std::vector<std::int64_t> im;
  bool complex = false;
};

inline std::optional<IntegerImage> integer_image(const ExactMatrix& m) {
  IntegerImage img;
  img.denominator = 1;
  for (std::size_t k = 0; k < m.nnz(); ++k) {
    const auto& v = m.value_at(k);
    mpz_lcm(img.denominator.get_mpz_t(), img.denominator.get_mpz_t(), v.re().get_den_mpz_t());
    if (!v.is_real()) {
      img.complex = true;
      mpz_lcm(img.denominator.get_mpz_t(), img.denominator.get_mpz_t(), v.im().get_den_mpz_t());
    }
    if (!img.denominator.fits_slong_p()) return std::nullopt;
  }
  img.re.resize(m.nnz());
  if (img.complex) img.im.resize(m.nnz());
  mpz_class t;
  auto scaled = [&](const mpq_class& q, std::int64_t& out) {
    t = img.denominator / q.get_den();
    t *= q.get_num();
    if (!t.fits_slong_p()) return false;
    out = t.get_si();
    return true;
  };
  for (std::size_t k = 0; k < m.nnz(); ++k) {
    const auto& v = m.value_at(k);
    if (!scaled(v.re(), img.re[k])) return std::nullopt;
    if (img.complex && !scaled(v.im(), img.im[k])) return std::nullopt;
  }
  return img;
}

inline void mpz_set_i128(mpz_t z, __int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_set_ui(z, static_cast<unsigned long>(u >> 64));
  mpz_mul_2exp(z, z, 64);
  mpz_add_ui(z, z, static_cast<unsigned long>(u & ~0UL));
  if (neg) mpz_neg(z, z);
}

inline std::optional<ExactMatrix> matmul_integer(const ExactMatrix& a, const ExactMatrix& b) {
  auto ia = integer_image(a);
  if (!ia) return std::nullopt;
  auto ib = integer_image(b);
  if (!ib) return std::nullopt;
  const bool complex = ia->complex || ib->complex;
  if (complex) {
    if (!ia->complex) ia->im.assign(a.nnz(), 0);
    if (!ib->complex) ib->im.assign(b.nnz(), 0);
  }
  const Index n = b.cols();
  std::vector<__int128> acc_re(n, 0), acc_im(complex ? n : 0, 0);
  std::vector<char> mark(n, 0);
  std::vector<Index> touched;
  MatrixBuilder out(a.rows(), b.cols());
  mpz_class den = ia->denominator * ib->denominator;
  mpq_class qre, qim;

  for (Index r = 0; r < a.rows(); ++r) {
    touched.clear();
    for (std::size_t ka = a.row_begin(r); ka < a.row_end(r); ++ka) {
      const Index mid = a.col_at(ka);
      const __int128 ar = ia->re[ka];
      const __int128 ai = complex ? ia->im[ka] : 0;
      for (std::size_t kb = b.row_begin(mid); kb < b.row_end(mid); ++kb) {
        const Index c = b.col_at(kb);
        if (!mark[c]) {
          mark[c] = 1;
          touched.push_back(c);
        }
        const __int128 br = ib->re[kb];
        if (!complex) {
          if (__builtin_add_overflow(acc_re[c], ar * br, &acc_re[c])) return std::nullopt;
        } else {
          const __int128 bi = ib->im[kb];
          if (__builtin_add_overflow(acc_re[c], ar * br - ai * bi, &acc_re[c])) return std::nullopt;
          if (__builtin_add_overflow(acc_im[c], ar * bi + ai * br, &acc_im[c])) return std::nullopt;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index c : touched) {
      mark[c] = 0;
      const bool re_zero = acc_re[c] == 0;
      const bool im_zero = !complex || acc_im[c] == 0;
      if (!(re_zero && im_zero)) {
        mpz_set_i128(mpq_numref(qre.get_mpq_t()), acc_re[c]);
        mpz_set(mpq_denref(qre.get_mpq_t()), den.get_mpz_t());
        qre.canonicalize();
        if (!im_zero) {
          mpz_set_i128(mpq_numref(qim.get_mpq_t()), acc_im[c]);
          mpz_set(mpq_denref(qim.get_mpq_t()), den.get_mpz_t());
          qim.canonicalize();
          out.push(c, GaussianRational(qre, qim));
        } else {
          out.push(c, GaussianRational(qre));
        }
      }
      acc_re[c] = 0;
      if (complex) acc_im[c] = 0;
    }
    out.end_row();
  }
  return out.finish();
}

inline ExactMatrix matmul_generic(const ExactMatrix& a, const ExactMatrix& b) {
  const Index n = b.cols();
  std::vector<GaussianRational> acc(n);
  std::vector<char> mark(n, 0);
  std::vector<Index> touched;
  MatrixBuilder out(a.rows(), b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    touched.clear();
    for (std::size_t ka = a.row_begin(r); ka < a.row_end(r); ++ka) {
      const Index mid = a.col_at(ka);
      const GaussianRational& av = a.value_at(ka);
      for (std::size_t kb = b.row_begin(mid); kb < b.row_end(mid); ++kb) {
        const Index c = b.col_at(kb);
        if (!mark[c]) {
          mark[c] = 1;
          touched.push_back(c);
        }
        acc[c].add_product(av, b.value_at(kb));
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index c : touched) {
      mark[c] = 0;
      if (!acc[c].is_zero()) out.push(c, std::move(acc[c]));
      acc[c] = GaussianRational();
    }
    out.end_row();
  }
  return out.finish();
}

}  // namespace detail

inline ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul dimension mismatch");
  if (a.is_zero() || b.is_zero()) return ExactMatrix(a.rows(), b.cols());
  if (auto fast = detail::matmul_integer(a, b)) return std::move(*fast);
  return detail::matmul_generic(a, b);
}

inline ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) { return matmul(a, b); }

inline ExactMatrix commutator(const ExactMatrix& a, const ExactMatrix& b) { return a * b - b * a; }
inline ExactMatrix anticommutator(const ExactMatrix& a, const ExactMatrix& b) { return a * b + b * a; }

// Block-diagonal direct sum.
inline ExactMatrix direct_sum(const ExactMatrix& a, const ExactMatrix& b) {
  std::vector<ExactMatrix::Entry> es = a.entries();
  for (auto e : b.entries()) es.push_back({e.row + a.rows(), e.col + a.cols(), e.value});
  return ExactMatrix::from_entries(a.rows() + b.rows(), a.cols() + b.cols(), std::move(es));
}

// Incremental Gauss-Jordan elimination. Stored rows are kept fully reduced
// with pivot entry 1; pivots are only taken in columns below pivot_limit.
class RowReducer {
 public:
  explicit RowReducer(Index ncols) : RowReducer(ncols, ncols) {}
  RowReducer(Index ncols, Index pivot_limit)
      : ncols_(ncols), pivot_limit_(pivot_limit), pivot_row_(ncols, npos) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Reduce v against the stored rows.
  SparseVector reduce(const SparseVector& v) const {
    if (v.dim() != ncols_) throw DimensionError("row length mismatch in elimination");
    SparseVector out = v;
    for (const auto& [c, val] : v.entries()) {
      std::size_t p = pivot_row_[c];
      if (p != npos) {
        GaussianRational coeff = out.at(c);
        if (!coeff.is_zero()) out.axpy(-coeff, rows_[p]);
      }
    }
    return out;
  }

  // Returns true if v enlarged the row space (within the pivot columns).
  bool insert(const SparseVector& v) {
    SparseVector r = reduce(v);
    last_residual_ = r;
    if (r.is_zero() || r.entries().front().first >= pivot_limit_) return false;
    const Index pc = r.entries().front().first;
    r = r.normalized();
    for (std::size_t q = 0; q < rows_.size(); ++q) {
      GaussianRational coeff = rows_[q].at(pc);
      if (!coeff.is_zero()) rows_[q].axpy(-coeff, r);
    }
    pivot_row_[pc] = rows_.size();
    pivots_.push_back(pc);
    rows_.push_back(std::move(r));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVector>& rows() const { return rows_; }
  const std::vector<Index>& pivots() const { return pivots_; }
  std::size_t pivot_row(Index col) const { return pivot_row_[col]; }
  const SparseVector& last_residual() const { return last_residual_; }
  Index ncols() const { return ncols_; }

 private:
  Index ncols_;
  Index pivot_limit_;
  std::vector<std::size_t> pivot_row_;
  std::vector<Index> pivots_;
  std::vector<SparseVector> rows_;
  SparseVector last_residual_;
};

inline std::size_t rank_of(const std::vector<SparseVector>& vectors, Index dim) {
  RowReducer red(dim);
  for (const auto& v : vectors) red.insert(v);
  return red.rank();
}

inline std::size_t rank(const ExactMatrix& m) {
  RowReducer red(m.cols());
  for (Index r = 0; r < m.rows(); ++r) red.insert(m.row(r));
  return red.rank();
}

inline bool is_independent(const VectorBasis& b) { return rank_of(b.vectors, b.ambient_dim) == b.size(); }

// Right null space, one vector per free column in increasing order,
// each scaled so its first nonzero coordinate is 1.
inline VectorBasis kernel_basis(const ExactMatrix& m) {
  RowReducer red(m.cols());
  for (Index r = 0; r < m.rows(); ++r) red.insert(m.row(r));
  std::vector<std::vector<SparseVector::Entry>> by_free(m.cols());
  std::vector<char> is_pivot(m.cols(), 0);
  for (Index p : red.pivots()) is_pivot[p] = 1;
  for (std::size_t k = 0; k < red.rank(); ++k) {
    const Index pc = red.pivots()[k];
    for (const auto& [c, v] : red.rows()[k].entries())
      if (!is_pivot[c]) by_free[c].emplace_back(pc, -v);
  }
  VectorBasis out{m.cols(), {}};
  for (Index f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    auto es = std::move(by_free[f]);
    es.emplace_back(f, GaussianRational(1));
    out.vectors.push_back(SparseVector::from_entries(m.cols(), std::move(es)).normalized());
  }
  return out;
}

// Coordinates of vectors with respect to a fixed independent family.
class BasisSolver {
 public:
  explicit BasisSolver(const VectorBasis& basis)
      : n_(basis.size()), ambient_(basis.ambient_dim), red_(basis.ambient_dim + basis.size(), basis.ambient_dim) {
    for (std::size_t j = 0; j < n_; ++j) {
      const SparseVector& b = basis.vectors[j];
      if (b.dim() != ambient_) throw DimensionError("basis vector has wrong length");
      std::vector<SparseVector::Entry> es(b.entries().begin(), b.entries().end());
      es.emplace_back(ambient_ + j, GaussianRational(1));
      if (!red_.insert(SparseVector::from_entries(ambient_ + n_, std::move(es))))
        throw DimensionError("basis vectors are linearly dependent (vector " + std::to_string(j) + ")");
    }
  }

  std::size_t size() const { return n_; }

  std::optional<SparseVector> coordinates(const SparseVector& w) const {
    if (w.dim() != ambient_) throw DimensionError("vector has wrong length");
    SparseVector ext(ambient_ + n_);
    std::vector<SparseVector::Entry> es(w.entries().begin(), w.entries().end());
    ext = SparseVector::from_entries(ambient_ + n_, std::move(es));
    SparseVector r = red_.reduce(ext);
    // r = w - sum u_k row_k; its ambient part must vanish.
    std::vector<SparseVector::Entry> coords;
    for (const auto& [c, v] : r.entries()) {
      if (c < ambient_) return std::nullopt;
      coords.emplace_back(c - ambient_, -v);
    }
    return SparseVector::from_entries(n_, std::move(coords));
  }

 private:
  std::size_t n_;
  Index ambient_;
  RowReducer red_;
};

// Matrix of m on span(basis) in basis coordinates.
inline ExactMatrix restrict_to(const ExactMatrix& m, const VectorBasis& basis, const BasisSolver& solver) {
  if (!m.is_square() || m.rows() != basis.ambient_dim) throw DimensionError("restrict dimension mismatch");
  std::vector<SparseVector> cols;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto c = solver.coordinates(m.apply(basis.vectors[j]));
    if (!c) throw NotInvariantError(j, "subspace not invariant: image of basis vector " + std::to_string(j) +
                                           " leaves the span");
    cols.push_back(std::move(*c));
  }
  return ExactMatrix::from_columns(basis.size(), cols);
}

inline ExactMatrix restrict_to(const ExactMatrix& m, const VectorBasis& basis) {
  return restrict_to(m, basis, BasisSolver(basis));
}

// sum_{j<k} n^j / j!, where n^k = 0 for some k <= nilpotency_bound.
inline ExactMatrix exp_nilpotent(const ExactMatrix& n, int nilpotency_bound) {
  if (!n.is_square()) throw DimensionError("exp of non-square matrix");
  ExactMatrix result = ExactMatrix::identity(n.rows());
  ExactMatrix term = result;
  for (int j = 1; j <= nilpotency_bound; ++j) {
    term = term * n;
    if (term.is_zero()) return result;
    if (j == nilpotency_bound) break;
    term *= GaussianRational(mpq_class(1, j));
    result = result + term;
  }
  throw NotNilpotentError("exponential series did not terminate within bound " + std::to_string(nilpotency_bound));
}

inline SparseVector exp_nilpotent_apply(const ExactMatrix& n, const SparseVector& v, int nilpotency_bound) {
  SparseVector result = v;
  SparseVector term = v;
  for (int j = 1; j <= nilpotency_bound; ++j) {
    term = n.apply(term);
    if (term.is_zero()) return result;
    if (j == nilpotency_bound) break;
    term *= GaussianRational(mpq_class(1, j));
    result.axpy(1, term);
  }
  throw NotNilpotentError("exponential series did not terminate within bound " + std::to_string(nilpotency_bound));
}

inline ExactMatrix power(const ExactMatrix& m, unsigned e) {
  ExactMatrix result = ExactMatrix::identity(m.rows());
  for (unsigned k = 0; k < e; ++k) result = result * m;
  return result;
}

inline std::ostream& operator<<(std::ostream& os, const SparseVector& v) {
  os << "[dim " << v.dim() << ":";
  for (const auto& [k, x] : v.entries()) os << ' ' << k << '=' << x;
  return os << ']';
}

// Exchange format: "dims r c" then "row col value" per nonzero; "#" starts a comment line.
inline void write_matrix(std::ostream& os, const ExactMatrix& m) {
  os << "dims " << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r)
    for (std::size_t k = m.row_begin(r); k < m.row_end(r); ++k)
      os << r << ' ' << m.col_at(k) << ' ' << m.value_at(k).to_string() << '\n';
}

inline std::string to_text(const ExactMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
  if (m.nnz() > 64) return os << "dims " << m.rows() << ' ' << m.cols() << " (" << m.nnz() << " nonzeros)";
  return os << '\n' << to_text(m);
}

inline std::vector<ExactMatrix> read_matrices(std::istream& is) {
  std::vector<ExactMatrix> out;
  std::vector<ExactMatrix::Entry> entries;
  Index rows = 0, cols = 0;
  bool open = false;
  std::vector<std::pair<Index, Index>> seen;
  auto close = [&]() {
    if (!open) return;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw ParseError("duplicate matrix entry");
    out.push_back(ExactMatrix::from_entries(rows, cols, std::move(entries)));
    entries.clear();
    seen.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto lead = line.find_first_not_of(" \t\r");
    if (lead == std::string::npos || line[lead] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "dims") {
      close();
      long long r = -1, c = -1;
      std::string extra;
      if (!(ls >> r >> c) || r < 0 || c < 0 || (ls >> extra))
        throw ParseError("line " + std::to_string(lineno) + ": bad dims header");
      rows = static_cast<Index>(r);
      cols = static_cast<Index>(c);
      open = true;
      continue;
    }
    if (!open) throw ParseError("line " + std::to_string(lineno) + ": entry before dims header");
    std::string cs, vs, extra;
    if (!(ls >> cs >> vs) || (ls >> extra)) throw ParseError("line " + std::to_string(lineno) + ": bad entry");
    auto parse_index = [&](const std::string& s) -> Index {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("line " + std::to_string(lineno) + ": bad index '" + s + "'");
      return static_cast<Index>(std::stoull(s));
    };
    Index r = parse_index(first), c = parse_index(cs);
    if (r >= rows || c >= cols) throw ParseError("line " + std::to_string(lineno) + ": index out of range");
    GaussianRational v = GaussianRational::parse(vs);
    if (v.is_zero()) throw ParseError("line " + std::to_string(lineno) + ": explicit zero entry");
    seen.emplace_back(r, c);
    entries.push_back({r, c, std::move(v)});
  }
  close();
  return out;
}

inline ExactMatrix read_matrix(std::istream& is) {
  auto ms = read_matrices(is);
  if (ms.size() != 1) throw ParseError("expected exactly one matrix block, found " + std::to_string(ms.size()));
  return std::move(ms.front());
}

inline ExactMatrix from_text(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

}  // namespace cubeleonard
