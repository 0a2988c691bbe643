#pragma once

#include "bilinear/config.hpp"
#include "bilinear/io.hpp"
#include "bilinear/schmidt.hpp"
#include "bilinear/schur.hpp"
#include "bilinear/spectra.hpp"
#include "bilinear/tensor.hpp"
