#include "lpreg/tensor.hpp"

#include <climits>
#include <cmath>

#include "lpreg/error.hpp"
#include "lpreg/regularity.hpp"

namespace lpreg {

IndexCodec::IndexCodec(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidArgument("IndexCodec: no dimensions");
  for (int d : dims_) {
    if (d <= 0) throw InvalidArgument("IndexCodec: dimensions must be positive");
    if (size_ > (std::int64_t{1} << 62) / d) throw InvalidArgument("IndexCodec: volume overflows");
    size_ *= d;
  }
}

std::int64_t IndexCodec::encode(std::span<const Index> tuple) const {
  if (tuple.size() != dims_.size()) throw InvalidArgument("IndexCodec: tuple has wrong arity");
  std::int64_t out = 0;
  for (std::size_t t = 0; t < dims_.size(); ++t) {
    if (tuple[t] < 0 || tuple[t] >= dims_[t]) throw InvalidArgument("IndexCodec: index out of range");
    out = out * dims_[t] + tuple[t];
  }
  return out;
}

Tuple IndexCodec::decode(std::int64_t linear) const {
  if (linear < 0 || linear >= size_) throw InvalidArgument("IndexCodec: linear index out of range");
  Tuple out(dims_.size());
  for (std::size_t t = dims_.size(); t-- > 0;) {
    out[t] = static_cast<Index>(linear % dims_[t]);
    linear /= dims_[t];
  }
  return out;
}

BinaryTensor::BinaryTensor(std::vector<int> dims, std::vector<Tuple> ones) : codec_(std::move(dims)) {
  if (codec_.dims().size() < 2) throw InvalidArgument("BinaryTensor: order must be at least 2");
  linear_.reserve(ones.size());
  for (const Tuple& t : ones) linear_.push_back(codec_.encode(t));
  std::ranges::sort(linear_);
  if (std::ranges::adjacent_find(linear_) != linear_.end())
    throw InvalidArgument("BinaryTensor: duplicate tuple");
}

std::vector<Tuple> BinaryTensor::ones() const {
  std::vector<Tuple> out;
  out.reserve(linear_.size());
  for (std::int64_t l : linear_) out.push_back(codec_.decode(l));
  return out;
}

bool BinaryTensor::at(std::span<const Index> tuple) const {
  return std::ranges::binary_search(linear_, codec_.encode(tuple));
}

namespace {
constexpr std::int64_t kDenseTensorLimit = std::int64_t{1} << 28;
}  // namespace

RealTensor::RealTensor(std::vector<int> dims, std::vector<double> values)
    : codec_(std::move(dims)), values_(std::move(values)) {
  if (codec_.size() > kDenseTensorLimit) throw LimitExceeded("RealTensor: volume too large");
  if (static_cast<std::int64_t>(values_.size()) != codec_.size())
    throw InvalidArgument("RealTensor: value count does not match dims");
}

RealTensor::RealTensor(std::vector<int> dims) : codec_(std::move(dims)) {
  if (codec_.size() > kDenseTensorLimit) throw LimitExceeded("RealTensor: volume too large");
  values_.assign(static_cast<std::size_t>(codec_.size()), 0.0);
}

RealTensor RealTensor::from_binary(const BinaryTensor& f) {
  RealTensor out(std::vector<int>(f.dims().begin(), f.dims().end()));
  for (std::int64_t l : f.linear_ones()) out[l] = 1.0;
  return out;
}

Flattening flatten(const BinaryTensor& f) {
  const int k = f.order();
  const int split = k / 2;
  std::vector<int> row_dims(f.dims().begin(), f.dims().begin() + split);
  std::vector<int> col_dims(f.dims().begin() + split, f.dims().end());
  IndexCodec rows(std::move(row_dims));
  IndexCodec cols(std::move(col_dims));
  if (rows.size() > INT_MAX || cols.size() > INT_MAX)
    throw LimitExceeded("flatten: matrix side exceeds int range");
  std::vector<BinaryMatrix::Entry> entries;
  entries.reserve(static_cast<std::size_t>(f.count()));
  for (std::int64_t l : f.linear_ones()) {
    // Row-major linearisation makes the split a plain division.
    entries.emplace_back(static_cast<Index>(l / cols.size()), static_cast<Index>(l % cols.size()));
  }
  BinaryMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()), std::move(entries));
  return Flattening{std::move(m), std::move(rows), std::move(cols), split};
}

BinaryTensor unflatten(const BinaryMatrix& m, std::vector<int> dims) {
  const IndexCodec codec(dims);
  if (dims.size() < 2) throw InvalidArgument("unflatten: order must be at least 2");
  const std::size_t split = dims.size() / 2;
  const IndexCodec rows(std::vector<int>(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(split)));
  const IndexCodec cols(std::vector<int>(dims.begin() + static_cast<std::ptrdiff_t>(split), dims.end()));
  if (rows.size() != m.rows() || cols.size() != m.cols())
    throw InvalidArgument("unflatten: matrix shape does not match dims");
  std::vector<Tuple> ones;
  ones.reserve(static_cast<std::size_t>(m.count()));
  for (const auto& [i, j] : m.ones())
    ones.push_back(codec.decode(static_cast<std::int64_t>(i) * cols.size() + j));
  return BinaryTensor(std::move(dims), std::move(ones));
}

namespace {

// Calls visit(linear) for every tuple in sides[0] x ... x sides[k-1].
template <class Visit>
void for_each_in_product(const IndexCodec& codec, std::span<const IndexSet> sides, Visit&& visit) {
  const std::size_t k = sides.size();
  for (const IndexSet& s : sides)
    if (s.empty()) return;
  std::vector<std::size_t> pos(k, 0);
  Tuple tuple(k);
  for (;;) {
    for (std::size_t t = 0; t < k; ++t) tuple[t] = sides[t][pos[t]];
    visit(codec.encode(tuple));
    std::size_t t = k;
    while (t > 0) {
      --t;
      if (++pos[t] < sides[t].size()) break;
      pos[t] = 0;
      if (t == 0) return;
    }
  }
}

}  // namespace

RealTensor cut_tensor_sum(std::span<const int> dims, std::span<const CutTensor> cuts) {
  RealTensor out(std::vector<int>(dims.begin(), dims.end()));
  for (const CutTensor& cut : cuts) {
    if (cut.sides.size() != dims.size()) throw InvalidArgument("cut_tensor_sum: arity mismatch");
    for_each_in_product(out.codec(), cut.sides, [&](std::int64_t l) { out[l] += cut.coefficient; });
  }
  return out;
}

TensorCutNormResult tensor_cut_norm_exact(const RealTensor& g, int limit) {
  const std::span<const int> dims = g.dims();
  const std::size_t k = dims.size();
  int total = 0;
  for (int d : dims) total += d;
  if (total > limit)
    throw LimitExceeded("tensor_cut_norm_exact: sum of dims " + std::to_string(total) +
                        " exceeds limit " + std::to_string(limit));

  std::size_t free = 0;
  for (std::size_t t = 1; t < k; ++t)
    if (dims[t] > dims[free]) free = t;
  std::vector<std::int64_t> stride(k, 1);
  for (std::size_t t = k - 1; t-- > 0;) stride[t] = stride[t + 1] * dims[t + 1];

  std::vector<std::size_t> others;
  std::vector<int> offset;
  int bits = 0;
  for (std::size_t t = 0; t < k; ++t) {
    if (t == free) continue;
    others.push_back(t);
    offset.push_back(bits);
    bits += dims[t];
  }

  TensorCutNormResult best;
  best.witness.assign(k, IndexSet{});
  const int nf = dims[free];
  std::vector<double> s(static_cast<std::size_t>(nf));
  std::vector<IndexSet> sel(others.size());
  std::vector<std::size_t> pos(others.size());
  const std::uint64_t masks = std::uint64_t{1} << bits;
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    bool empty = false;
    for (std::size_t o = 0; o < others.size(); ++o) {
      sel[o].clear();
      for (int i = 0; i < dims[others[o]]; ++i)
        if ((mask >> (offset[o] + i)) & 1U) sel[o].push_back(i);
      empty = empty || sel[o].empty();
    }
    if (empty) continue;

    std::ranges::fill(s, 0.0);
    std::ranges::fill(pos, 0);
    for (;;) {
      std::int64_t base = 0;
      for (std::size_t o = 0; o < others.size(); ++o) base += sel[o][pos[o]] * stride[others[o]];
      for (int j = 0; j < nf; ++j) s[static_cast<std::size_t>(j)] += g[base + j * stride[free]];
      std::size_t o = others.size();
      bool done = true;
      while (o > 0) {
        --o;
        if (++pos[o] < sel[o].size()) {
          done = false;
          break;
        }
        pos[o] = 0;
      }
      if (done) break;
    }

    for (const double sign : {1.0, -1.0}) {
      double value = 0.0;
      IndexSet free_side;
      for (int j = 0; j < nf; ++j) {
        const double v = sign * s[static_cast<std::size_t>(j)];
        if (v > 0.0) {
          value += v;
          free_side.push_back(j);
        }
      }
      if (value > best.value + kTolerance) {
        best.value = value;
        for (std::size_t o = 0; o < others.size(); ++o) best.witness[others[o]] = sel[o];
        best.witness[free] = std::move(free_side);
      }
    }
  }
  return best;
}

TensorCutNormResult tensor_cut_norm_exact(const BinaryTensor& f, int limit) {
  return tensor_cut_norm_exact(RealTensor::from_binary(f), limit);
}

namespace {

struct Stats {
  std::size_t product_sides = 0;
  std::size_t rounded_sides = 0;
  std::size_t budget = 0;
  bool exhausted = false;
};

std::vector<CutTensor> decompose_rec(const BinaryTensor& f, double eps, double C, double p,
                                     const OracleConfig& oracle, Stats& stats,
                                     std::size_t* top_cut_matrices);

struct Piece {
  std::vector<IndexSet> sides;
  double coefficient = 1.0;
};

// Approximates the indicator of a set of linear indices over codec's dims
// by a combination of product sets.
std::vector<Piece> side_pieces(const IndexSet& linear, const IndexCodec& codec, double eps_side,
                               double C, double p, const OracleConfig& oracle, Stats& stats) {
  const std::size_t k = codec.dims().size();
  if (k == 1) return {Piece{{linear}, 1.0}};

  std::vector<Tuple> tuples;
  tuples.reserve(linear.size());
  std::vector<IndexSet> projections(k);
  for (Index l : linear) {
    tuples.push_back(codec.decode(l));
    for (std::size_t t = 0; t < k; ++t) projections[t].push_back(tuples.back()[t]);
  }
  double product = 1.0;
  for (IndexSet& s : projections) {
    s = make_index_set(std::move(s));
    product *= static_cast<double>(s.size());
  }
  if (product == static_cast<double>(linear.size())) {
    ++stats.product_sides;
    return {Piece{std::move(projections), 1.0}};
  }

  ++stats.rounded_sides;
  const BinaryTensor side(std::vector<int>(codec.dims().begin(), codec.dims().end()), std::move(tuples));
  const double c_side = std::max(C, certified_regularity_constant(flatten(side).matrix, p));
  std::vector<Piece> out;
  for (CutTensor& cut : decompose_rec(side, eps_side, c_side, p, oracle, stats, nullptr))
    out.push_back(Piece{std::move(cut.sides), cut.coefficient});
  return out;
}

bool take_budget(Stats& stats) {
  if (stats.budget == 0) {
    stats.exhausted = true;
    return false;
  }
  --stats.budget;
  return true;
}

std::vector<CutTensor> decompose_rec(const BinaryTensor& f, double eps, double C, double p,
                                     const OracleConfig& oracle, Stats& stats,
                                     std::size_t* top_cut_matrices) {
  std::vector<CutTensor> out;
  if (f.count() == 0) return out;
  const Flattening fl = flatten(f);
  const double a0 = oracle.validated().alpha_claim;
  const int k = f.order();
  const double eps_top = k == 2 ? eps : eps / 2.0;
  const DecompositionResult r = decompose(fl.matrix, synthesize_params(eps_top, C, p, a0), oracle);
  if (top_cut_matrices != nullptr) *top_cut_matrices = r.cut_matrices.size();

  if (k == 2) {
    for (const CutMatrix& cut : r.cut_matrices) {
      if (!take_budget(stats)) return out;
      out.push_back(CutTensor{{cut.support.rows, cut.support.cols}, cut.coefficient});
    }
    return out;
  }

  const double eps_side = std::sqrt(1.0 + eps / 2.0) - 1.0;
  for (const CutMatrix& cut : r.cut_matrices) {
    if (cut.coefficient == 0.0) continue;
    const std::vector<Piece> rows = side_pieces(cut.support.rows, fl.rows, eps_side, C, p, oracle, stats);
    const std::vector<Piece> cols = side_pieces(cut.support.cols, fl.cols, eps_side, C, p, oracle, stats);
    for (const Piece& a : rows) {
      for (const Piece& b : cols) {
        const double c = cut.coefficient * a.coefficient * b.coefficient;
        if (c == 0.0) continue;
        if (!take_budget(stats)) return out;
        CutTensor t;
        t.sides = a.sides;
        t.sides.insert(t.sides.end(), b.sides.begin(), b.sides.end());
        t.coefficient = c;
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace

TensorDecomposition tensor_decompose(const BinaryTensor& f, double eps, double C, double p,
                                     const OracleConfig& oracle, std::size_t budget, bool verify) {
  TensorDecomposition out;
  const int k = f.order();
  out.eps = eps;
  out.eps_top = k == 2 ? eps : eps / 2.0;
  out.eps_side = k == 2 ? 0.0 : std::sqrt(1.0 + eps / 2.0) - 1.0;
  out.bound = eps * static_cast<double>(f.count());
  const DecomposeParams top = synthesize_params(out.eps_top, C, p, oracle.validated().alpha_claim);
  out.log_count_target = 2.0 * (k - 1) * (std::log(2.0 * C / eps) - 2.0 * top.log_eta);

  Stats stats;
  stats.budget = budget;
  out.cuts = decompose_rec(f, eps, C, p, oracle, stats, &out.top_cut_matrices);
  out.product_sides = stats.product_sides;
  out.rounded_sides = stats.rounded_sides;
  out.complete = !stats.exhausted;

  int total = 0;
  for (int d : f.dims()) total += d;
  if (verify && total <= kTensorCutNormLimit) {
    RealTensor residual = RealTensor::from_binary(f);
    const RealTensor approx = cut_tensor_sum(f.dims(), out.cuts);
    for (std::int64_t l = 0; l < residual.codec().size(); ++l) residual[l] -= approx[l];
    out.residual_cut_norm = tensor_cut_norm_exact(residual).value;
    const bool within = *out.residual_cut_norm <= out.bound + kTolerance;
    out.status = within && out.complete ? CertificateStatus::verified : CertificateStatus::failed;
  }
  return out;
}

}  // namespace lpreg
