#include "quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace satqkd::detail {

namespace {

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, std::vector<double> points,
                   double rel_tolerance, std::size_t max_intervals) {
  silence_gsl();
  Integral out;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) return out;

  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
      gsl_integration_workspace_alloc(max_intervals));
  if (!ws) {
    out.status = GSL_ENOMEM;
    return out;
  }

  gsl_function fn;
  fn.function = &trampoline;
  fn.params = const_cast<std::function<double(double)>*>(&f);

  out.status = gsl_integration_qagp(&fn, points.data(), points.size(), 0.0, rel_tolerance,
                                    max_intervals, ws.get(), &out.value, &out.abs_error);
  out.intervals = ws->size;
  return out;
}

}  // namespace satqkd::detail
