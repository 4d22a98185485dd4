"""Plugging an external generator in over the subprocess protocol.

The black-box boundary is a child process: it receives the binary latent
container (magic "LEVO") on stdin and answers with a binary PPM on stdout.
Here the shipped test stub plays the child; a real generation pipeline
would speak the same ten lines of protocol.
"""

import sys
from pathlib import Path

import latent_evo as le
from latent_evo.cli import cli_main

stub = Path("gen_stub.py")
cli_main(["gen-stub", "--out", str(stub)])

shape = le.LatentShape(4, 2, 2)
generator = le.SubprocessGenerator(
    shape, width=16, height=16,
    command=[sys.executable, str(stub), "--width", "16", "--height", "16"])

rng = le.SeededRng(21)
z = le.sample_standard_gaussian(shape, rng)
image = generator.generate(z)
print(f"child produced a {image.width}x{image.height} image "
      f"({len(image.pixels)} bytes of pixels)")

again = generator.generate(z)
print(f"deterministic child: identical bytes = {image.pixels == again.pixels}")

result = le.best_of_n(generator, le.make_scorer(le.RewardSpec.smoothness()),
                      n=32, rng=rng.child(1), batch_size=8)
print(f"best-of-32 smoothness through the child process: "
      f"{result.best_reward:.3f}")

le.write_ppm("subprocess_best.ppm", generator.generate(result.best_latent))
print("best image written to subprocess_best.ppm")
