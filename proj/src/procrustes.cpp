#include "simspace/mds.hpp"

namespace simspace::mds {

ProcrustesFit procrustes_fit(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const ProcrustesOptions& options) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("procrustes: configurations differ in shape");
  if (a.rows() == 0) throw Error("procrustes: empty configuration");

  const Eigen::RowVectorXd mean_a = a.colwise().mean();
  const Eigen::RowVectorXd mean_b = b.colwise().mean();
  const Eigen::MatrixXd ca = a.rowwise() - mean_a;
  const Eigen::MatrixXd cb = b.rowwise() - mean_b;

  // max trace(R^T cb^T ca) over orthogonal R: R = U V^T from cb^T ca = U S V^T.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cb.transpose() * ca, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesFit fit;
  fit.rotation = svd.matrixU() * svd.matrixV().transpose();
  const double norm_b = cb.squaredNorm();
  if (options.allow_scale && norm_b > 0.0) fit.scale = svd.singularValues().sum() / norm_b;
  fit.aligned = fit.scale * cb * fit.rotation;
  fit.aligned.rowwise() += mean_a;
  fit.translation = mean_a - fit.scale * mean_b * fit.rotation;
  fit.disparity = (a - fit.aligned).squaredNorm();
  return fit;
}

ProcrustesResult procrustes_align(const Embedding& a, const Embedding& b, const ProcrustesOptions& options) {
  if (a.size() != b.size()) throw Error("procrustes: id mismatch (different point counts)");
  if (a.dims() != b.dims()) throw Error("procrustes: dimension mismatch");
  Eigen::MatrixXd reordered(b.size(), b.dims());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto& id = a.ids()[i];
    Eigen::Index row = 0;
    try {
      row = b.index_of(id);
    } catch (const Error&) {
      throw Error("procrustes: id mismatch ('" + id + "' missing)");
    }
    reordered.row(i) = b.coords().row(row);
  }
  auto fit = procrustes_fit(a.coords(), reordered, options);
  return ProcrustesResult{Embedding(a.ids(), std::move(fit.aligned), b.stress1()), fit.disparity};
}

}  // namespace simspace::mds
