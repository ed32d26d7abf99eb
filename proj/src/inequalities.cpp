namespace heislab {}
