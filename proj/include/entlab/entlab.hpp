#pragma once

#include "entlab/error.hpp"
#include "entlab/blockmat.hpp"
#include "entlab/algebra.hpp"
#include "entlab/entangle.hpp"
#include "entlab/channel.hpp"
#include "entlab/entropy.hpp"
#include "entlab/random.hpp"
#include "entlab/capacity.hpp"
#include "entlab/io.hpp"
#include "entlab/verify.hpp"
