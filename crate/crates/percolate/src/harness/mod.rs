// experiment harness
