// Walks through the library on the deferred-repair model: pre-processing with
// HPC removal, the three ZVA-Delta estimators and the exact value.

#include <cstdio>
#include <string>

#include "pathzva/pathzva.hpp"

int main() {
  using namespace pathzva;
  const double eps = 0.01;
  auto model = zoo::make_two_type(zoo::fig4_params(eps));

  PreprocessResult pre = preprocess(*model);
  const auto& rep = pre.report();
  std::printf("|Lambda| = %zu, |Gamma| = %zu, d(s,g) = %s, P(Delta) = %.6e\n", rep.lambda_size, rep.gamma_size,
              rep.distance.to_string().c_str(), rep.v_delta_initial);
  for (const auto& h : pre.hpcs()) {
    std::printf("HPC {");
    for (auto m : h.members) std::printf(" %s", model->describe(pre.space().descriptor(m)).c_str());
    std::printf(" } exits from the trigger:");
    for (const auto& e : pre.row(h.trigger)) {
      std::string to = e.target == pre.goal() ? "g" : model->describe(pre.space().descriptor(e.target));
      std::printf(" %s %.2f%%", to.c_str(), 100.0 * e.probability);
    }
    std::printf("\n");
  }

  const double exact = exact_hitting_probability(*model).pi;
  for (Variant v : {Variant::Plain, Variant::Plus, Variant::PlusPlus}) {
    RunOptions opts;
    opts.variant = v;
    opts.runs = 10'000;
    opts.seed = 1;
    Estimate e = run_estimator(*model, {MeasureKind::ZvaDelta}, &pre, opts);
    std::string hw = e.ci_available ? std::to_string(100.0 * e.relative_half_width()) + "%" : "---";
    std::printf("%-9s %.6e +- %s  (M = %zu)\n", to_string(v).c_str(), e.mean, hw.c_str(), e.n_nondominant);
  }
  std::printf("exact     %.6e\n", exact);
  return 0;
}
