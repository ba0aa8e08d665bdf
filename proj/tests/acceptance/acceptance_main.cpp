#include <iostream>

#include "ngmres/acceptance.hpp"

int main()
{
  const auto results = ngmres::run_acceptance(std::cout);
  for (const auto &r : results)
  {
    if (!r.pass)
    {
      return 1;
    }
  }
  return 0;
}
