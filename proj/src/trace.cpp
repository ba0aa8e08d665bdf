#include "ngmres/trace.hpp"

#include <charconv>

namespace ngmres
{

std::string_view to_string(Method m)
{
  switch (m)
  {
    case Method::gmres:
      return "gmres";
    case Method::ngmres:
      return "ngmres";
    case Method::anderson:
      return "anderson";
    case Method::mr:
      return "mr";
    case Method::ngmres1_three_term:
      return "ngmres1";
    case Method::conjugate_residual:
      return "cr";
  }
  return "unknown";
}

std::string_view to_string(Termination t)
{
  switch (t)
  {
    case Termination::tolerance:
      return "tolerance";
    case Termination::max_iter:
      return "max_iter";
    case Termination::stagnation:
      return "stagnation";
    case Termination::breakdown:
      return "breakdown";
  }
  return "unknown";
}

Termination parse_termination(std::string_view name)
{
  for (Termination t : {Termination::tolerance, Termination::max_iter, Termination::stagnation,
                        Termination::breakdown})
  {
    if (name == to_string(t))
    {
      return t;
    }
  }
  throw std::invalid_argument("unknown termination reason '" + std::string(name) + "'");
}

std::string_view to_string(ResidualMode m)
{
  return m == ResidualMode::explicit_recompute ? "explicit" : "recursive";
}

ResidualMode parse_residual_mode(std::string_view name)
{
  if (name == "explicit")
  {
    return ResidualMode::explicit_recompute;
  }
  if (name == "recursive")
  {
    return ResidualMode::recursive;
  }
  throw std::invalid_argument("unknown residual mode '" + std::string(name) + "'");
}

WindowSize WindowSize::of(Index m)
{
  if (m < 0)
  {
    throw std::invalid_argument("window size must be non-negative");
  }
  return WindowSize(m);
}

std::string WindowSize::to_string() const
{
  return depth_ ? std::to_string(*depth_) : "full";
}

WindowSize WindowSize::parse(std::string_view text)
{
  if (text == "full" || text == "FULL")
  {
    return full();
  }
  Index m = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
  if (ec != std::errc() || end != text.data() + text.size() || m < 0)
  {
    throw std::invalid_argument("invalid window size '" + std::string(text) + "'");
  }
  return of(m);
}

void SolveConfig::validate() const
{
  if (max_iter < 1)
  {
    throw std::invalid_argument("max_iter must be at least 1");
  }
  if (!(tol > 0.0))
  {
    throw std::invalid_argument("tol must be positive");
  }
  if (!(rank_tol > 0.0))
  {
    throw std::invalid_argument("rank_tol must be positive");
  }
  if (stagnation_window < 0)
  {
    throw std::invalid_argument("stagnation_window must be non-negative");
  }
}

std::string IterationTrace::label() const
{
  std::string name(to_string(method));
  if (method == Method::ngmres || method == Method::anderson)
  {
    name += "(" + window.to_string() + ")";
  }
  return name;
}

std::vector<double> IterationTrace::resnorms() const
{
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto &rec : records)
  {
    out.push_back(rec.resnorm);
  }
  return out;
}

}  // namespace ngmres
