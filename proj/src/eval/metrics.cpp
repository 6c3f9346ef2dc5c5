//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "pagforge/chem/canonical.h"
#include "pagforge/screening/fragments.h"
#include "pagforge/util/error.h"
#include "pagforge/util/hash.h"
#include "pagforge/util/parallel.h"

namespace pagforge::eval {
namespace {

constexpr double kRidge = 1e-6;
constexpr double kSingular = 1e-10;

void require(bool ok, const char *what) {
  if (!ok)
    throw InvalidArgument(what);
}

int workers(int threads) { return threads > 0 ? threads : default_threads(); }

Eigen::MatrixXd sqrtm_sym(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

bool singular(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() <= kSingular;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd &x) {
  Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  return (c.transpose() * c) / static_cast<double>(x.rows() - 1);
}

} // namespace

double uniqueness(const std::vector<std::string> &canonical) {
  require(!canonical.empty(), "uniqueness of an empty set");
  std::set<std::string> u(canonical.begin(), canonical.end());
  return static_cast<double>(u.size()) / static_cast<double>(canonical.size());
}

double novelty(const std::vector<std::string> &canonical,
               const std::unordered_set<std::string> &train) {
  require(!canonical.empty(), "novelty of an empty set");
  std::set<std::string> u(canonical.begin(), canonical.end());
  long fresh = std::count_if(u.begin(), u.end(),
                             [&](const std::string &s) { return !train.contains(s); });
  return static_cast<double>(fresh) / static_cast<double>(u.size());
}

double intdiv(const std::vector<desc::Fingerprint> &fps, int threads) {
  require(!fps.empty(), "intdiv of an empty set");
  std::size_t n = fps.size();
  std::vector<double> row(n, 0.0);
  parallel_for(
      n,
      [&](std::size_t i) {
        double s = 1.0;  // self pair
        for (std::size_t j = i + 1; j < n; ++j)
          s += 2.0 * desc::tanimoto(fps[i], fps[j]);
        row[i] = s;
      },
      workers(threads));
  double total = 0.0;
  for (double r: row)
    total += r;
  return 1.0 - total / (static_cast<double>(n) * static_cast<double>(n));
}

double snn(const std::vector<desc::Fingerprint> &gen,
           const std::vector<desc::Fingerprint> &ref, int threads) {
  require(!gen.empty() && !ref.empty(), "snn of an empty set");
  std::vector<double> best(gen.size(), 0.0);
  parallel_for(
      gen.size(),
      [&](std::size_t i) {
        for (const auto &r: ref)
          best[i] = std::max(best[i], desc::tanimoto(gen[i], r));
      },
      workers(threads));
  double total = 0.0;
  for (double b: best)
    total += b;
  return total / static_cast<double>(gen.size());
}

double cosine(const Counts &a, const Counts &b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto &[k, v]: a) {
    na += static_cast<double>(v) * v;
    if (auto it = b.find(k); it != b.end())
      dot += static_cast<double>(v) * it->second;
  }
  for (const auto &[k, v]: b)
    nb += static_cast<double>(v) * v;
  if (na == 0.0 || nb == 0.0)
    throw InvalidArgument("cosine of an all-zero count vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Counts fragment_counts(const std::vector<chem::Molecule> &mols) {
  Counts out;
  for (const auto &m: mols) {
    for (const auto &f: screen::brics_fragment_smiles(m))
      ++out[f];
  }
  return out;
}

Counts scaffold_counts(const std::vector<chem::Molecule> &mols) {
  Counts out;
  for (const auto &m: mols) {
    auto s = screen::murcko_scaffold(m);
    if (!s.empty())
      ++out[chem::canonical_smiles(s)];
  }
  return out;
}

double scaffold_similarity(const Counts &gen, const Counts &ref) {
  if (gen.empty() || ref.empty())
    throw InvalidArgument("scaffold similarity undefined without ring scaffolds");
  return cosine(gen, ref);
}

FrechetResult frechet_distance(const Eigen::VectorXd &mu1, const Eigen::MatrixXd &s1,
                               const Eigen::VectorXd &mu2, const Eigen::MatrixXd &s2) {
  require(mu1.size() == mu2.size() && s1.rows() == mu1.size() &&
              s2.rows() == mu2.size() && s1.cols() == s1.rows() &&
              s2.cols() == s2.rows(),
          "frechet dimension mismatch");
  FrechetResult r;
  Eigen::MatrixXd a = s1, b = s2;
  if (singular(a) || singular(b)) {
    Eigen::MatrixXd ridge = kRidge * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    a += ridge;
    b += ridge;
    r.ridge = true;
  }
  Eigen::MatrixXd ra = sqrtm_sym(a);
  Eigen::MatrixXd inner = ra * b * ra;
  inner = 0.5 * (inner + inner.transpose());
  double tr = a.trace() + b.trace() - 2.0 * sqrtm_sym(inner).trace();
  r.distance = std::max(0.0, (mu1 - mu2).squaredNorm() + tr);
  if (!std::isfinite(r.distance))
    throw NumericError("non-finite Frechet distance");
  return r;
}

FrechetResult frechet_descriptor_distance(const Eigen::MatrixXd &gen,
                                          const Eigen::MatrixXd &ref) {
  require(gen.rows() >= 2 && ref.rows() >= 2, "Frechet distance needs two samples per set");
  require(gen.cols() == ref.cols(), "descriptor width mismatch");
  Eigen::RowVectorXd mean = ref.colwise().mean();
  Eigen::RowVectorXd sd = covariance(ref).diagonal().cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < sd.size(); ++j) {
    if (!(sd(j) > 0.0))
      sd(j) = 1.0;
  }
  auto scale = [&](const Eigen::MatrixXd &x) -> Eigen::MatrixXd {
    return (x.rowwise() - mean).array().rowwise() / sd.array();
  };
  Eigen::MatrixXd g = scale(gen), r = scale(ref);
  return frechet_distance(g.colwise().mean().transpose(), covariance(g),
                          r.colwise().mean().transpose(), covariance(r));
}

Eigen::MatrixXd descriptor_matrix(const std::vector<desc::DescriptorVector> &d) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d.size()), desc::DescriptorVector::kSize);
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto a = d[i].as_array();
    for (int j = 0; j < desc::DescriptorVector::kSize; ++j)
      m(static_cast<Eigen::Index>(i), j) = a[j];
  }
  return m;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "wasserstein1 of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Integrate |Fa - Fb| over the merged support.
  std::vector<double> xs(a);
  xs.insert(xs.end(), b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    while (ia < a.size() && a[ia] <= xs[k])
      ++ia;
    while (ib < b.size() && b[ib] <= xs[k])
      ++ib;
    total += std::abs(ia / na - ib / nb) * (xs[k + 1] - xs[k]);
  }
  return total;
}

nlohmann::json MetricConfig::to_json() const {
  return { { "fingerprint", { { "kind", "morgan" }, { "radius", fp_radius }, { "width", fp_width } } },
           { "fcd_substitute", { { "space", "descriptors" }, { "standardize", "reference" }, { "ridge", kRidge } } },
           { "scaffolds", "murcko_ring_only" },
           { "intdiv", "tanimoto_all_pairs" } };
}

std::string MetricConfig::hash() const { return sha256_hex(to_json().dump()).substr(0, 16); }

nlohmann::json MetricReport::to_json() const {
  return { { "fcd_substitute", fcd_substitute },
           { "fcd_substitute_ridge", fcd_ridge },
           { "snn", snn },
           { "frag", frag },
           { "scaf", scaf },
           { "wasserstein_mw", wasserstein_mw },
           { "wasserstein_logp", wasserstein_logp },
           { "wasserstein_sa", wasserstein_sa },
           { "intdiv", intdiv },
           { "uniqueness", uniqueness },
           { "novelty", novelty },
           { "sizes", { { "generated", generated }, { "reference", reference }, { "training", training } } },
           { "config_hash", config_hash } };
}

std::string MetricReport::table(const std::string &label) const {
  static const char *cols[] = { "Comp. set", "FCD*", "SNN", "Frag.", "Scaf.", "MW",
                                "logP", "SA", "IntDiv", "Uniq.", "Nov." };
  std::vector<double> vals { fcd_substitute, snn, frag, scaf, wasserstein_mw,
                             wasserstein_logp, wasserstein_sa, intdiv, uniqueness, novelty };
  std::ostringstream os;
  int first = std::max<int>(10, static_cast<int>(label.size()) + 1);
  os << std::left << std::setw(first) << cols[0];
  for (int i = 1; i < 11; ++i)
    os << std::right << std::setw(10) << cols[i];
  os << '\n' << std::left << std::setw(first) << label << std::right << std::fixed
     << std::setprecision(3);
  for (double v: vals)
    os << std::setw(10) << v;
  os << "\n* descriptor-space Frechet distance, not comparable to ChemNet FCD\n";
  return os.str();
}

MetricReport evaluate(const std::vector<chem::Molecule> &generated,
                      const std::vector<chem::Molecule> &reference,
                      const std::unordered_set<std::string> &train_canonical,
                      const MetricConfig &config) {
  require(!generated.empty() && !reference.empty(), "evaluate needs non-empty sets");
  auto prepare = [&](const std::vector<chem::Molecule> &mols,
                     std::vector<desc::Fingerprint> &fps,
                     std::vector<desc::DescriptorVector> &descs,
                     std::vector<std::string> &canon) {
    fps.resize(mols.size());
    descs.resize(mols.size());
    canon.resize(mols.size());
    parallel_for(
        mols.size(),
        [&](std::size_t i) {
          fps[i] = desc::morgan_fingerprint(mols[i], config.fp_radius, config.fp_width);
          descs[i] = desc::compute_descriptors(mols[i]);
          canon[i] = chem::canonical_smiles(mols[i]);
        },
        workers(config.threads));
  };
  std::vector<desc::Fingerprint> gfp, rfp;
  std::vector<desc::DescriptorVector> gd, rd;
  std::vector<std::string> gc, rc;
  prepare(generated, gfp, gd, gc);
  prepare(reference, rfp, rd, rc);

  MetricReport r;
  auto fr = frechet_descriptor_distance(descriptor_matrix(gd), descriptor_matrix(rd));
  r.fcd_substitute = fr.distance;
  r.fcd_ridge = fr.ridge;
  r.snn = snn(gfp, rfp, config.threads);
  r.frag = cosine(fragment_counts(generated), fragment_counts(reference));
  r.scaf = scaffold_similarity(scaffold_counts(generated), scaffold_counts(reference));
  auto column = [](const std::vector<desc::DescriptorVector> &d, double desc::DescriptorVector::*f) {
    std::vector<double> out;
    for (const auto &x: d)
      out.push_back(x.*f);
    return out;
  };
  using DV = desc::DescriptorVector;
  r.wasserstein_mw = wasserstein1(column(gd, &DV::mw), column(rd, &DV::mw));
  r.wasserstein_logp = wasserstein1(column(gd, &DV::logp), column(rd, &DV::logp));
  r.wasserstein_sa = wasserstein1(column(gd, &DV::sa), column(rd, &DV::sa));
  r.intdiv = intdiv(gfp, config.threads);
  r.uniqueness = uniqueness(gc);
  r.novelty = novelty(gc, train_canonical);
  r.generated = generated.size();
  r.reference = reference.size();
  r.training = train_canonical.size();
  r.config_hash = config.hash();
  return r;
}

} // namespace pagforge::eval
