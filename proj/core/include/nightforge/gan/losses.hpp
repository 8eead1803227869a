#pragma once

#include "nightforge/nn/autograd.hpp"

namespace nightforge::gan {

using nn::Var;

/// Least-squares generator objective over a patch of discriminator scores:
/// mean((score - 1)^2). Zero exactly when every score is 1.
Var loss_gan_generator(const Var& fake_scores);

/// Least-squares discriminator objective:
/// mean((real - 1)^2) + mean(fake^2). Zero exactly when real scores are
/// all 1 and fake scores all 0.
Var loss_gan_discriminator(const Var& real_scores, const Var& fake_scores);

/// Mean-L1 round-trip penalty for both translation directions. Throws
/// ShapeError when a reconstruction does not match its original's shape.
Var loss_cycle(const Var& x, const Var& x_reconstructed, const Var& y,
               const Var& y_reconstructed);

/// Mean-L1 penalty for altering images already in the generator's target
/// domain.
Var loss_identity(const Var& y, const Var& y_identity, const Var& x,
                  const Var& x_identity);

struct LossParts {
  Var adv_day_to_night;  // generator objective, day->night direction
  Var adv_night_to_day;  // generator objective, night->day direction
  Var cycle;
  Var identity;
};

/// Weighted sum of the four parts; linear in both weights.
Var total_objective(const LossParts& parts, double lambda_cyc,
                    double lambda_id);

}  // namespace nightforge::gan
