# Handlers package 