#pragma once

#include "markovsharp/bounds.hpp"
#include "markovsharp/error.hpp"
#include "markovsharp/io.hpp"
#include "markovsharp/linalg.hpp"
#include "markovsharp/markov.hpp"
#include "markovsharp/orthopoly.hpp"
#include "markovsharp/quadrature.hpp"
#include "markovsharp/recurrence.hpp"
#include "markovsharp/selftest.hpp"
#include "markovsharp/weight.hpp"
