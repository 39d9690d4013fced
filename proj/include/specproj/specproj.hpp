#ifndef SPECPROJ_SPECPROJ_HPP
#define SPECPROJ_SPECPROJ_HPP

#include "specproj/spectrum.hpp"
#include "specproj/operators.hpp"
#include "specproj/damping.hpp"
#include "specproj/quadrature.hpp"
#include "specproj/eig.hpp"
#include "specproj/assembly.hpp"
#include "specproj/abscissa.hpp"
#include "specproj/analysis.hpp"
#include "specproj/io.hpp"

#endif  // SPECPROJ_SPECPROJ_HPP
