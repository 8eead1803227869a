#include "nightforge/gan/losses.hpp"

namespace nightforge::gan {

using namespace nn;

Var loss_gan_generator(const Var& fake_scores) {
  return mean_all(square(add_scalar(fake_scores, -1.0)));
}

Var loss_gan_discriminator(const Var& real_scores, const Var& fake_scores) {
  return add(mean_all(square(add_scalar(real_scores, -1.0))),
             mean_all(square(fake_scores)));
}

Var loss_cycle(const Var& x, const Var& x_reconstructed, const Var& y,
               const Var& y_reconstructed) {
  return add(mean_all(abs_elem(sub(x_reconstructed, x))),
             mean_all(abs_elem(sub(y_reconstructed, y))));
}

Var loss_identity(const Var& y, const Var& y_identity, const Var& x,
                  const Var& x_identity) {
  return add(mean_all(abs_elem(sub(y_identity, y))),
             mean_all(abs_elem(sub(x_identity, x))));
}

Var total_objective(const LossParts& parts, double lambda_cyc,
                    double lambda_id) {
  Var total = add(parts.adv_day_to_night, parts.adv_night_to_day);
  total = add(total, mul_scalar(parts.cycle, lambda_cyc));
  total = add(total, mul_scalar(parts.identity, lambda_id));
  return total;
}

}  // namespace nightforge::gan
