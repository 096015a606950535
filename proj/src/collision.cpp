namespace kinlab {}
